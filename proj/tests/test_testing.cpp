#include "ovlq/testing.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "generators.hpp"
#include "oracles.hpp"

using namespace ovlq;

TEST_CASE("reports reject exactly when pvalue < alpha") {
  NullTable table;
  table.q = 2;
  table.n = 1;
  table.reps = 4;
  table.seed = 0;
  table.values = {0.1, 0.2, 0.3, 0.4};

  const EmpiricalSample s({0.55});  // d2 vs uniform: 0.55 - (0.55-1) = 1 -> p = 0
  const auto reject = ovlq_test(s, DistributionSpec::uniform01(), 2, 0.05, table);
  CHECK(reject.pvalue == 0.0);
  CHECK(reject.reject);

  // p exactly equal to alpha must not reject (strict inequality)
  NullTable boundary;
  boundary.q = 2;
  boundary.n = 1;
  boundary.reps = 4;
  boundary.values = {0.5, 0.6, 1.0, 1.0};
  const auto at_alpha =
      ovlq_test(s, DistributionSpec::uniform01(), 2, 0.5, boundary);
  CHECK(at_alpha.pvalue == 0.5);
  CHECK_FALSE(at_alpha.reject);
}

TEST_CASE("single-point asymptotic ovlq test composes statistic and series") {
  const EmpiricalSample s({0.5});
  const auto report =
      ovlq_test_asymptotic(s, DistributionSpec::uniform01(), 2, 0.05);
  CHECK(report.statistic == 1.0);
  CHECK(report.pvalue == asymptotic_sf_d2(1.0));
  CHECK(report.pvalue_method == "Asymptotic");
  CHECK(report.test_name == "OVLQ(2)");
}

TEST_CASE("q=1 asymptotic equals the classical KS p-value") {
  Xoshiro256pp rng(41);
  for (int i = 0; i < 20; ++i) {
    const auto [s, spec] = generators::random_instance(rng, 64);
    const auto ovl = ovlq_test_asymptotic(s, spec, 1, 0.05);
    const auto ks = ks_test_asymptotic(s, spec, 0.05);
    CHECK(ovl.statistic == ks.statistic);
    CHECK(ovl.pvalue == ks.pvalue);
    const double expected =
        asymptotic_sf_d1(std::sqrt(static_cast<double>(s.n())) * ks.statistic);
    CHECK(ks.pvalue == expected);
  }
  CHECK_THROWS_AS(ovlq_test_asymptotic(EmpiricalSample({0.5}),
                                       DistributionSpec::uniform01(), 3, 0.05),
                  std::invalid_argument);
}

TEST_CASE("cvm statistic worked examples") {
  const auto uniform = DistributionSpec::uniform01();
  CHECK(cvm_statistic(EmpiricalSample({0.5}), uniform) ==
        doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  CHECK(cvm_statistic(EmpiricalSample({0.25, 0.75}), uniform) ==
        doctest::Approx(1.0 / 24.0).epsilon(1e-15));

  Xoshiro256pp rng(42);
  for (int i = 0; i < 100; ++i) {
    const auto [s, spec] = generators::random_instance(rng, 32);
    CHECK(cvm_statistic(s, spec) >= 1.0 / (12.0 * s.n()));
  }
}

TEST_CASE("probability integral transform leaves all statistics unchanged") {
  Xoshiro256pp rng(43);
  const auto uniform = DistributionSpec::uniform01();
  for (int i = 0; i < 100; ++i) {
    const auto [s, spec] = generators::random_instance(rng, 48);
    std::vector<double> transformed(s.values().size());
    for (std::size_t k = 0; k < transformed.size(); ++k) {
      transformed[k] = cdf(spec, s.values()[k]);
    }
    const EmpiricalSample u(std::move(transformed));
    for (int q : {1, 2, 3}) {
      CHECK(dq_statistic(s, spec, q) ==
            doctest::Approx(dq_statistic(u, uniform, q)).epsilon(1e-12));
    }
    CHECK(cvm_statistic(s, spec) ==
          doctest::Approx(cvm_statistic(u, uniform)).epsilon(1e-12));
  }
}

TEST_CASE("table mismatches are refused") {
  const NullTable table = build_null_table(2, 8, 50, 1);
  const auto s4 = sample(DistributionSpec::uniform01(), 4, 9);
  const auto s8 = sample(DistributionSpec::uniform01(), 8, 9);
  const auto uniform = DistributionSpec::uniform01();
  CHECK_THROWS_AS(ovlq_test(s4, uniform, 2, 0.05, table), std::invalid_argument);
  CHECK_THROWS_AS(ovlq_test(s8, uniform, 3, 0.05, table), std::invalid_argument);
  CHECK_THROWS_AS(ks_test(s8, uniform, 0.05, table), std::invalid_argument);
  CHECK_THROWS_AS(cvm_test(s8, uniform, 0.05, table), std::invalid_argument);

  const NullTable cvm = build_cvm_null_table(8, 50, 1);
  CHECK_NOTHROW(cvm_test(s8, uniform, 0.05, cvm));
  CHECK_THROWS_AS(ovlq_test(s8, uniform, 2, 0.05, cvm), std::invalid_argument);
}

TEST_CASE("reports serialize to flat json") {
  TestReport report;
  report.test_name = "OVLQ(2)";
  report.statistic = 0.5;
  report.pvalue = 0.25;
  report.pvalue_method = "MonteCarlo(q=2,n=8,reps=100,seed=7)";
  report.alpha = 0.05;
  report.reject = false;
  const std::string json = to_json(report);
  CHECK(json ==
        "{\"test_name\":\"OVLQ(2)\",\"statistic\":0.5,\"pvalue\":0.25,"
        "\"pvalue_method\":\"MonteCarlo(q=2,n=8,reps=100,seed=7)\","
        "\"alpha\":0.050000000000000003,\"reject\":false}");
}

TEST_CASE("monte-carlo and asymptotic ovl-2 p-values converge at n=4096") {
  const int n = 4096;
  const NullTable d2_table = build_null_table(2, n, 20000, 8080, 0);
  const NullTable ks_table = build_null_table(1, n, 20000, 8081, 0);
  const auto normal = DistributionSpec::normal(0, 1);
  const int trials = 1000;
  double d2_gap = 0.0;
  double ks_gap = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto s = sample(normal, n, mix_seed(9090, t));
    const double d2 = d2_statistic(s, normal);
    const double ks = ks_statistic(s, normal);
    const double root_n = std::sqrt(static_cast<double>(n));
    d2_gap += std::abs(empirical_pvalue(d2_table, d2) -
                       asymptotic_sf_d2(root_n * d2));
    ks_gap += std::abs(empirical_pvalue(ks_table, ks) -
                       asymptotic_sf_d1(root_n * ks));
  }
  CHECK(d2_gap / trials < 0.02);
  CHECK(ks_gap / trials < 0.02);
}
