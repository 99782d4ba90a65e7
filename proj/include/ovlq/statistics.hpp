#pragma once

#include <span>
#include <vector>

#include "ovlq/distributions.hpp"

namespace ovlq {

// Jump-candidate values of delta(x) = F_n(x) - F(x) in positional order.
// Writing x_(i) for the i-th order statistic,
//
//   lo_i = (i-1)/n - F(x_(i))   (left limit at x_(i))
//   hi_i =     i/n - F(x_(i))   (value at x_(i))
//
// and delta vanishes at +/-inf, giving the leading and trailing zeros:
//
//   events = 0, lo_1, hi_1, ..., lo_n, hi_n, 0        (length 2n + 2)
//
// Between consecutive jumps delta is continuous and monotone, so every
// extremum of delta over the reals is attained or approached at an event.
struct DeltaEnvelope {
  std::vector<double> events;
  double delta_max = 0.0;  // sup delta, >= 0
  double delta_min = 0.0;  // inf delta, <= 0
};

DeltaEnvelope delta_envelope(const EmpiricalSample& sample,
                             const DistributionSpec& ref);

// D_1(F_n, F) = sup |F_n - F| = max(delta_max, -delta_min).
double ks_statistic(const EmpiricalSample& sample, const DistributionSpec& ref);

// D_2(F_n, F) = delta_max - delta_min (Kuiper-type range of delta).
double d2_statistic(const EmpiricalSample& sample, const DistributionSpec& ref);

// D_q(F_n, F) for any q >= 1: half the largest total variation of a path
// 0 -> e_{j_1} -> ... -> e_{j_q} -> 0 over nondecreasing event positions.
// Exact-match guarantees: q=1 equals ks_statistic and q=2 equals
// d2_statistic, bit for bit.
double dq_statistic(const EmpiricalSample& sample, const DistributionSpec& ref,
                    int q);

// Span variants over an already-sorted sample; allocation-free for q <= 2.
// Hot path of the Monte-Carlo loops.
double ks_of_sorted(std::span<const double> sorted, const DistributionSpec& ref);
double d2_of_sorted(std::span<const double> sorted, const DistributionSpec& ref);
double dq_of_sorted(std::span<const double> sorted, const DistributionSpec& ref,
                    int q);

// The dynamic program behind dq_statistic, applicable to any event sequence
// whose underlying difference function starts and ends at 0 (e.g. the delta
// values of two step CDFs at their merged jumps). O(len * q) time, O(q)
// space. See dq_statistic for the semantics.
double dq_from_events(std::span<const double> events, int q);

// Right-continuous step CDF: value(x) = post_jump_values[k] for x in
// [jump_points[k], jump_points[k+1]), 0 before the first jump. The last
// post-jump value must be 1.
class StepCdf {
 public:
  StepCdf(std::vector<double> jump_points, std::vector<double> post_jump_values);

  double value(double x) const;
  const std::vector<double>& jump_points() const { return jumps_; }
  const std::vector<double>& post_jump_values() const { return values_; }

 private:
  std::vector<double> jumps_;
  std::vector<double> values_;
};

// Brute-force D_q(f, g) straight from the defining minimization of
//
//   r(v) = sum_i min{ f|(v_i, v_i+1], g|(v_i, v_i+1] },    D_q = 1 - inf r,
//
// enumerating all nondecreasing q-tuples over the merged jump points plus
// midpoints and sentinels. Exponential in q: a test oracle, not a
// production path. Throws if candidates^q exceeds 1e8.
double dq_oracle(const StepCdf& f, const StepCdf& g, int q);

}  // namespace ovlq
