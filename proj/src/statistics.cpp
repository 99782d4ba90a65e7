#include "ovlq/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ovlq {

namespace {

double clamp_unit(double x) { return std::min(std::max(x, 0.0), 1.0); }

// Streams the envelope extremes without materializing the event vector.
void delta_extremes(std::span<const double> sorted, const DistributionSpec& ref,
                    double& delta_max, double& delta_min) {
  const double n = static_cast<double>(sorted.size());
  double max_v = 0.0;
  double min_v = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double fx = cdf(ref, sorted[i]);
    const double lo = static_cast<double>(i) / n - fx;
    const double hi = static_cast<double>(i + 1) / n - fx;
    min_v = std::min(min_v, lo);
    max_v = std::max(max_v, hi);
  }
  delta_max = max_v;
  delta_min = min_v;
}

void fill_events(std::span<const double> sorted, const DistributionSpec& ref,
                 std::vector<double>& events) {
  const double n = static_cast<double>(sorted.size());
  events.clear();
  events.reserve(2 * sorted.size() + 2);
  events.push_back(0.0);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double fx = cdf(ref, sorted[i]);
    events.push_back(static_cast<double>(i) / n - fx);
    events.push_back(static_cast<double>(i + 1) / n - fx);
  }
  events.push_back(0.0);
}

}  // namespace

DeltaEnvelope delta_envelope(const EmpiricalSample& sample,
                             const DistributionSpec& ref) {
  DeltaEnvelope env;
  fill_events(sample.values(), ref, env.events);
  env.delta_max = *std::max_element(env.events.begin(), env.events.end());
  env.delta_min = *std::min_element(env.events.begin(), env.events.end());
  return env;
}

double ks_of_sorted(std::span<const double> sorted, const DistributionSpec& ref) {
  double dmax, dmin;
  delta_extremes(sorted, ref, dmax, dmin);
  return clamp_unit(std::max(dmax, -dmin));
}

double d2_of_sorted(std::span<const double> sorted, const DistributionSpec& ref) {
  double dmax, dmin;
  delta_extremes(sorted, ref, dmax, dmin);
  return clamp_unit(dmax - dmin);
}

double dq_of_sorted(std::span<const double> sorted, const DistributionSpec& ref,
                    int q) {
  if (q < 1) throw std::invalid_argument("dq_statistic: q must be >= 1");
  std::vector<double> events;
  fill_events(sorted, ref, events);
  return dq_from_events(events, q);
}

double ks_statistic(const EmpiricalSample& sample, const DistributionSpec& ref) {
  return ks_of_sorted(sample.values(), ref);
}

double d2_statistic(const EmpiricalSample& sample, const DistributionSpec& ref) {
  return d2_of_sorted(sample.values(), ref);
}

double dq_statistic(const EmpiricalSample& sample, const DistributionSpec& ref,
                    int q) {
  return dq_of_sorted(sample.values(), ref, q);
}

// The maximized total variation decomposes into alternating extrema: a path
// 0 -> c_1 -> ... -> c_q -> 0 has total variation 2 * (sum of its local
// maxima - sum of its local minima), so D_q equals the best alternating
// signed sum of at most q events taken in positional order:
//
//   D_q = max over t <= q, j_1 <= ... <= j_t, alternating signs s
//         of  sum_k s_k * e_{j_k}.
//
// plus[k] (minus[k]) is the best sum of exactly k values from the prefix
// scanned so far whose last sign is + (-). Repeated positions contribute a
// cancelling pair, which is why prefix maxima suffice. Compared with the
// direct recurrence best[k][j] = max_i (best[k-1][i] + |e_j - e_i|), this
// form combines each candidate in a single rounding, which is what makes
// the q=1/q=2 results bitwise equal to the closed forms.
double dq_from_events(std::span<const double> events, int q) {
  if (q < 1) throw std::invalid_argument("dq_from_events: q must be >= 1");
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<double> plus(static_cast<std::size_t>(q) + 1, kNegInf);
  std::vector<double> minus(static_cast<std::size_t>(q) + 1, kNegInf);
  plus[0] = minus[0] = 0.0;
  for (const double e : events) {
    for (int k = q; k >= 1; --k) {
      if (minus[k - 1] != kNegInf) plus[k] = std::max(plus[k], minus[k - 1] + e);
      if (plus[k - 1] != kNegInf) minus[k] = std::max(minus[k], plus[k - 1] - e);
    }
  }
  double best = 0.0;
  for (int k = 1; k <= q; ++k) best = std::max({best, plus[k], minus[k]});
  return clamp_unit(best);
}

StepCdf::StepCdf(std::vector<double> jump_points,
                 std::vector<double> post_jump_values)
    : jumps_(std::move(jump_points)), values_(std::move(post_jump_values)) {
  if (jumps_.empty() || jumps_.size() != values_.size()) {
    throw std::invalid_argument("StepCdf: need equally many jumps and values");
  }
  if (!std::is_sorted(jumps_.begin(), jumps_.end()) ||
      std::adjacent_find(jumps_.begin(), jumps_.end()) != jumps_.end()) {
    throw std::invalid_argument("StepCdf: jump points must be strictly increasing");
  }
  double prev = 0.0;
  for (double v : values_) {
    if (!(v >= prev) || v > 1.0) {
      throw std::invalid_argument("StepCdf: values must be nondecreasing in [0,1]");
    }
    prev = v;
  }
  if (values_.back() != 1.0) {
    throw std::invalid_argument("StepCdf: last value must be 1");
  }
}

double StepCdf::value(double x) const {
  const auto it = std::upper_bound(jumps_.begin(), jumps_.end(), x);
  if (it == jumps_.begin()) return 0.0;
  return values_[static_cast<std::size_t>(it - jumps_.begin()) - 1];
}

double dq_oracle(const StepCdf& f, const StepCdf& g, int q) {
  if (q < 1) throw std::invalid_argument("dq_oracle: q must be >= 1");

  // Candidate cut points: every jump of either input, a midpoint inside
  // every gap between consecutive jumps, and sentinels beyond the extremes.
  // Both CDFs are constant between jumps, so these positions realize every
  // distinct value of r.
  std::vector<double> cuts;
  cuts.reserve(f.jump_points().size() + g.jump_points().size());
  cuts.insert(cuts.end(), f.jump_points().begin(), f.jump_points().end());
  cuts.insert(cuts.end(), g.jump_points().begin(), g.jump_points().end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<double> candidates;
  candidates.reserve(2 * cuts.size() + 2);
  candidates.push_back(cuts.front() - 1.0);
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    candidates.push_back(cuts[i]);
    if (i + 1 < cuts.size()) candidates.push_back(0.5 * (cuts[i] + cuts[i + 1]));
  }
  candidates.push_back(cuts.back() + 1.0);

  const std::size_t m = candidates.size();
  double combos = 1.0;
  for (int k = 0; k < q; ++k) combos *= static_cast<double>(m);
  if (combos > 1e8) {
    throw std::invalid_argument("dq_oracle: candidate set too large for brute force");
  }

  // Nondecreasing index tuples via an odometer.
  std::vector<std::size_t> idx(static_cast<std::size_t>(q), 0);
  double min_r = std::numeric_limits<double>::infinity();
  for (;;) {
    double r = 0.0;
    double pf = 0.0, pg = 0.0;  // F, G at v_0 = -inf
    for (int k = 0; k < q; ++k) {
      const double v = candidates[idx[static_cast<std::size_t>(k)]];
      const double cf = f.value(v);
      const double cg = g.value(v);
      r += std::min(cf - pf, cg - pg);
      pf = cf;
      pg = cg;
    }
    r += std::min(1.0 - pf, 1.0 - pg);
    min_r = std::min(min_r, r);

    int pos = q - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == m - 1) --pos;
    if (pos < 0) break;
    const std::size_t next = idx[static_cast<std::size_t>(pos)] + 1;
    for (int k = pos; k < q; ++k) idx[static_cast<std::size_t>(k)] = next;
  }
  return clamp_unit(1.0 - min_r);
}

}  // namespace ovlq
