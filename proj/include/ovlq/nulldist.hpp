#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ovlq/statistics.hpp"

namespace ovlq {

// Limit of P(sqrt(n) * D_2(F_n, F) >= a):
//
//   2 * sum_{i>=1} (4 i^2 a^2 - 1) exp(-2 i^2 a^2)
//
// summed until a term's magnitude drops below 1e-16, at most 100 terms,
// clamped to [0, 1]. The series is numerically useless below a = 0.4 where
// the survival function is indistinguishable from 1, so 1 is returned
// there. Throws std::domain_error for a <= 0.
double asymptotic_sf_d2(double a);

// Kolmogorov limit of P(sqrt(n) * D_1(F_n, F) >= a):
//
//   2 * sum_{i>=1} (-1)^(i-1) exp(-2 i^2 a^2)
//
// same truncation and clamping rules; below a = 0.2 the truncated series
// breaks down and 1 is returned (absolute error under 5e-13).
double asymptotic_sf_d1(double a);

enum class TableKind { OvlQ, Cvm };

// Sorted Monte-Carlo draws of a statistic under the null hypothesis,
// regenerable bit for bit from (kind, q, n, reps, seed).
struct NullTable {
  TableKind kind = TableKind::OvlQ;
  int q = 0;  // OvlQ only
  int n = 0;
  int reps = 0;
  std::uint64_t seed = 0;
  std::vector<double> values;

  std::string id() const;
};

// Statistic of one sorted Uniform01 sample, evaluated against Uniform01.
using SortedSampleStat = std::function<double(std::span<const double>)>;

// reps replicates of D_q(U_n, U), each drawn from the substream
// mix_seed(seed, replicate), then sorted. Streams one replicate at a time,
// so memory stays O(reps + threads * n) regardless of reps * n.
NullTable build_null_table(int q, int n, int reps, std::uint64_t seed,
                           int threads = 1);

// Same machinery with an arbitrary statistic kernel (e.g. Cramer-von Mises).
NullTable build_null_table_with(TableKind kind, int q, int n, int reps,
                                std::uint64_t seed, const SortedSampleStat& stat,
                                int threads = 1);

// #{table values >= stat} / reps, the empirical P(stat <= D under H0).
// p = 1 is attained at or below the minimum, p = 0 only past the maximum.
double empirical_pvalue(const NullTable& table, double stat);

// inf{x : empirical_pvalue(x) < alpha}. See the rank convention in the
// implementation. Throws std::domain_error unless 0 < alpha < 1.
double critical_value(const NullTable& table, double alpha);

// Text format, UTF-8 with LF line ends:
//
//   ovlq-null-table v1
//   q=<int>
//   n=<int>
//   reps=<int>
//   seed=<uint64>
//   sha256=<hex of the concatenated value lines, each including its LF>
//   <reps lines, one value each, 17 significant digits>
//
// The round trip is bit-exact. Only OVL-q tables are persisted.
void save_table(const NullTable& table, const std::filesystem::path& path);

// Throws std::runtime_error on version mismatch, checksum failure, value
// count mismatch, or malformed content.
NullTable load_table(const std::filesystem::path& path);

}  // namespace ovlq
