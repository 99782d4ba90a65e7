#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ovlq/rng.hpp"

namespace ovlq {

enum class DistKind { Uniform01, Normal, Trapezoidal, Mixture };

// A continuous distribution with a closed-form CDF and a deterministic
// sampler. The four families are the ones used in the experiments:
//
//   Uniform01    U(x) = max{0, min{x, 1}}
//   Normal       mean mu, standard deviation sigma > 0
//   Trapezoidal  symmetric on [-2, 2], flat on [-sqrt(2), sqrt(2)],
//                density (x+2)/2 and (2-x)/2 on the flanks
//   Mixture      (Normal(-0.8, 0.6) + Normal(0.8, 0.6)) / 2
struct DistributionSpec {
  DistKind kind = DistKind::Uniform01;
  double mu = 0.0;     // Normal only
  double sigma = 1.0;  // Normal only

  static DistributionSpec uniform01() { return {DistKind::Uniform01, 0.0, 1.0}; }
  static DistributionSpec normal(double mu, double sigma);  // throws if sigma <= 0
  static DistributionSpec trapezoidal() { return {DistKind::Trapezoidal, 0.0, 1.0}; }
  static DistributionSpec mixture() { return {DistKind::Mixture, 0.0, 1.0}; }

  std::string name() const;
};

// Accepts "uniform", "normal(mu,sigma)", "trapezoidal", "mixture";
// case-insensitive. Throws std::invalid_argument otherwise.
DistributionSpec parse_distribution(std::string_view text);

double cdf(const DistributionSpec& spec, double x);

// Phi(z), absolute error below 1e-15 (erfc based).
double standard_normal_cdf(double z);

// Inverse of the trapezoidal CDF; domain [0, 1].
double trapezoidal_quantile(double u);

// A sample held sorted; induces the empirical CDF that jumps by 1/n at each
// value. Ties are allowed, the sample may not be empty or contain
// non-finite values.
class EmpiricalSample {
 public:
  explicit EmpiricalSample(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  int n() const { return static_cast<int>(values_.size()); }

 private:
  std::vector<double> values_;
};

// n i.i.d. draws, sorted; a pure function of (spec, n, seed).
EmpiricalSample sample(const DistributionSpec& spec, int n, std::uint64_t seed);

// Same draws as sample(), written into `out` (resized to n, then sorted).
// Reusing `out` keeps Monte-Carlo inner loops allocation-free.
void sample_into(const DistributionSpec& spec, int n, std::uint64_t seed,
                 std::vector<double>& out);

// #{values <= x} / n.
double ecdf(const EmpiricalSample& sample, double x);

// One decimal value per line; '#' starts a comment; blank lines are
// skipped. Parse failures report the 1-based line number.
EmpiricalSample load_sample_file(const std::filesystem::path& path);

}  // namespace ovlq
