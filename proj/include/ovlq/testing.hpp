#pragma once

#include <string>

#include "ovlq/nulldist.hpp"

namespace ovlq {

// Outcome of one hypothesis test. reject holds exactly when pvalue < alpha
// (strict).
struct TestReport {
  std::string test_name;      // "OVLQ(<q>)", "KS", "CVM"
  double statistic = 0.0;
  double pvalue = 1.0;
  std::string pvalue_method;  // "Asymptotic" or "MonteCarlo(<table id>)"
  double alpha = 0.05;
  bool reject = false;
};

// Flat JSON object with exactly the field names above; numbers carry 17
// significant digits.
std::string to_json(const TestReport& report);

// OVL-q test with a Monte-Carlo p-value. The table must match (q, n);
// mismatches throw std::invalid_argument.
TestReport ovlq_test(const EmpiricalSample& sample, const DistributionSpec& ref,
                     int q, double alpha, const NullTable& table);

// OVL-q test with the asymptotic p-value sf(sqrt(n) * statistic);
// only q = 1 (Kolmogorov series) and q = 2 are supported.
TestReport ovlq_test_asymptotic(const EmpiricalSample& sample,
                                const DistributionSpec& ref, int q, double alpha);

// Classical one-sample KS test (identical statistic to OVL-1).
TestReport ks_test(const EmpiricalSample& sample, const DistributionSpec& ref,
                   double alpha, const NullTable& table);
TestReport ks_test_asymptotic(const EmpiricalSample& sample,
                              const DistributionSpec& ref, double alpha);

// Cramer-von Mises statistic
//
//   W^2 = 1/(12n) + sum_i ((2i-1)/(2n) - F(x_(i)))^2.
double cvm_statistic(const EmpiricalSample& sample, const DistributionSpec& ref);
double cvm_of_sorted(std::span<const double> sorted, const DistributionSpec& ref);

// Null table of W^2 under Uniform01; p-values for cvm_test come from here
// (these tables stay in memory, only OVL-q tables have a file format).
NullTable build_cvm_null_table(int n, int reps, std::uint64_t seed,
                               int threads = 1);

TestReport cvm_test(const EmpiricalSample& sample, const DistributionSpec& ref,
                    double alpha, const NullTable& table);

}  // namespace ovlq
