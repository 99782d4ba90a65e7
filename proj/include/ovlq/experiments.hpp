#pragma once

#include <functional>
#include <iosfwd>
#include <utility>

#include "ovlq/testing.hpp"

namespace ovlq {

// Statistical-power study: for every (sampling, reference) pair, sample
// size, and test, the fraction of `trials` i.i.d. samples whose null
// hypothesis (sample drawn from the reference) is rejected at level alpha.
// Null tables are shared per (test, n) and keyed by seed streams disjoint
// from the trial streams. Everything is a pure function of the config.
struct PowerStudyConfig {
  std::vector<std::pair<DistributionSpec, DistributionSpec>> pairs;
  std::vector<int> sizes = {8, 16, 32, 64, 128, 256, 512, 1024};
  int trials = 5000;
  int table_reps = 100000;
  double alpha = 0.05;
  int q = 2;  // the OVL-q entrant
  std::uint64_t seed = 0;
  int threads = 1;
  std::function<void(const std::string&)> progress;  // optional, e.g. stderr
};

// The six pairs of the experiment protocol.
std::vector<std::pair<DistributionSpec, DistributionSpec>> default_power_pairs();

struct PowerRow {
  std::string sampling_dist;
  std::string reference_dist;
  int n = 0;
  std::string test;  // "OVL-<q>", "KS", "CVM"
  int trials = 0;
  int rejections = 0;
  double power = 0.0;
};

struct PowerGrid {
  std::vector<PowerRow> rows;
};

PowerGrid run_power_study(const PowerStudyConfig& config);

// Header "sampling_dist,reference_dist,n,test,trials,rejections,power".
void write_power_csv(const PowerGrid& grid, std::ostream& out);

// Null-distribution convergence study: empirical CDF of sqrt(n) * D_2(U_n, U)
// on a grid of a values, next to the asymptotic CDF.
struct ConvergenceConfig {
  std::vector<int> sizes = {8, 32, 128, 512};
  int reps = 20000;
  int grid_points = 1000;
  double a_min = 0.5;
  double a_max = 2.5;
  std::uint64_t seed = 0;
  int threads = 1;
  std::function<void(const std::string&)> progress;
};

struct ConvergenceRow {
  int n = 0;
  double a = 0.0;
  double empirical_cdf = 0.0;
  double asymptotic_cdf = 0.0;
};

struct ConvergenceGrid {
  std::vector<ConvergenceRow> rows;
};

ConvergenceGrid run_convergence_study(const ConvergenceConfig& config);

// Header "n,a,empirical_cdf,asymptotic_cdf".
void write_convergence_csv(const ConvergenceGrid& grid, std::ostream& out);

}  // namespace ovlq
