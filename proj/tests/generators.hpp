#pragma once

// Random instance generators shared by the unit and acceptance suites.

#include <utility>
#include <vector>

#include "ovlq/rng.hpp"
#include "ovlq/statistics.hpp"

namespace generators {

inline ovlq::DistributionSpec random_spec(ovlq::Xoshiro256pp& rng) {
  switch (rng.next() % 4) {
    case 0:
      return ovlq::DistributionSpec::uniform01();
    case 1: {
      const double mu = 4.0 * rng.next_double() - 2.0;
      const double sigma = 0.3 + 2.2 * rng.next_double();
      return ovlq::DistributionSpec::normal(mu, sigma);
    }
    case 2:
      return ovlq::DistributionSpec::trapezoidal();
    default:
      return ovlq::DistributionSpec::mixture();
  }
}

// Sample of size in [1, max_n] from a random spec; retries in the
// measure-zero event of tied values (the step-pair reductions need strict
// order).
inline std::pair<ovlq::EmpiricalSample, ovlq::DistributionSpec>
random_instance(ovlq::Xoshiro256pp& rng, int max_n, bool distinct = false) {
  const ovlq::DistributionSpec spec = random_spec(rng);
  const int n = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(max_n));
  for (;;) {
    ovlq::EmpiricalSample sample = ovlq::sample(spec, n, rng.next());
    if (distinct) {
      bool ok = true;
      const auto& v = sample.values();
      for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i - 1] == v[i]) ok = false;
      }
      if (!ok) continue;
    }
    return {std::move(sample), spec};
  }
}

inline ovlq::StepCdf random_step_cdf(ovlq::Xoshiro256pp& rng, int max_jumps) {
  const int jumps = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(max_jumps));
  std::vector<double> points;
  points.reserve(static_cast<std::size_t>(jumps));
  double x = -3.0 + 2.0 * rng.next_double();
  for (int i = 0; i < jumps; ++i) {
    points.push_back(x);
    x += 0.05 + 2.0 * rng.next_double();  // strictly increasing
  }
  std::vector<double> values(points.size());
  double total = 0.0;
  for (double& v : values) {
    v = 0.01 + rng.next_double();
    total += v;
  }
  double cum = 0.0;
  for (double& v : values) {
    cum += v;
    v = cum / total;
  }
  values.back() = 1.0;
  return ovlq::StepCdf(std::move(points), std::move(values));
}

}  // namespace generators
