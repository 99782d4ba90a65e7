#include "ovlq/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ovlq/parallel.hpp"

namespace ovlq {

namespace {

// Seed-stream tags; tables and trials must never share a substream.
constexpr std::uint64_t kTableStream = 1;
constexpr std::uint64_t kTrialStream = 2;
constexpr std::uint64_t kConvergenceStream = 3;

constexpr std::uint64_t kOvlKernel = 0;
constexpr std::uint64_t kKsKernel = 1;
constexpr std::uint64_t kCvmKernel = 2;

std::string format_number(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

// Distribution names like normal(0.2,1) contain commas; quote such fields.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void report(const std::function<void(const std::string&)>& progress,
            const std::string& message) {
  if (progress) progress(message);
}

}  // namespace

std::vector<std::pair<DistributionSpec, DistributionSpec>> default_power_pairs() {
  const auto n01 = DistributionSpec::normal(0.0, 1.0);
  return {
      {DistributionSpec::normal(0.2, 1.0), n01},
      {DistributionSpec::normal(0.0, 1.1), n01},
      {DistributionSpec::trapezoidal(), n01},
      {DistributionSpec::mixture(), n01},
      {DistributionSpec::trapezoidal(), DistributionSpec::mixture()},
      {DistributionSpec::mixture(), DistributionSpec::trapezoidal()},
  };
}

PowerGrid run_power_study(const PowerStudyConfig& config) {
  if (config.pairs.empty()) {
    throw std::invalid_argument("power study: no distribution pairs");
  }
  if (config.trials < 100) {
    throw std::invalid_argument(
        "power study: fewer than 100 trials gives meaningless rates; refusing");
  }
  if (config.q < 1) throw std::invalid_argument("power study: q must be >= 1");
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw std::invalid_argument("power study: alpha must be in (0,1)");
  }
  for (int n : config.sizes) {
    if (n < 1) throw std::invalid_argument("power study: sizes must be >= 1");
  }

  const std::string ovl_name = "OVL-" + std::to_string(config.q);
  const DistributionSpec uniform = DistributionSpec::uniform01();
  PowerGrid grid;
  grid.rows.reserve(config.pairs.size() * config.sizes.size() * 3);

  for (int n : config.sizes) {
    report(config.progress, "building null tables, n=" + std::to_string(n));
    const NullTable ovl_table = build_null_table(
        config.q, n, config.table_reps,
        derive_seed(config.seed, {kTableStream, kOvlKernel, (std::uint64_t)n}),
        config.threads);
    const NullTable ks_table = build_null_table(
        1, n, config.table_reps,
        derive_seed(config.seed, {kTableStream, kKsKernel, (std::uint64_t)n}),
        config.threads);
    const NullTable cvm_table = build_cvm_null_table(
        n, config.table_reps,
        derive_seed(config.seed, {kTableStream, kCvmKernel, (std::uint64_t)n}),
        config.threads);

    for (std::size_t pair_idx = 0; pair_idx < config.pairs.size(); ++pair_idx) {
      const auto& [sampling, reference] = config.pairs[pair_idx];
      // One rejection flag per trial and test; index-addressed writes keep
      // the outcome independent of scheduling.
      std::vector<std::uint8_t> ovl_reject(config.trials, 0);
      std::vector<std::uint8_t> ks_reject(config.trials, 0);
      std::vector<std::uint8_t> cvm_reject(config.trials, 0);

      parallel_for(0, config.trials, config.threads, [&](std::int64_t t) {
        thread_local std::vector<double> sample_buffer;
        thread_local std::vector<double> transformed;
        const std::uint64_t trial_seed = derive_seed(
            config.seed,
            {kTrialStream, (std::uint64_t)pair_idx, (std::uint64_t)n,
             (std::uint64_t)t});
        sample_into(sampling, n, trial_seed, sample_buffer);
        // Evaluate the reference CDF once; by the probability integral
        // transform every statistic of (sample, reference) equals the same
        // statistic of (transformed, Uniform01), value for value.
        transformed.resize(sample_buffer.size());
        for (std::size_t i = 0; i < sample_buffer.size(); ++i) {
          transformed[i] = cdf(reference, sample_buffer[i]);
        }
        double ovl_stat;
        if (config.q == 2) {
          ovl_stat = d2_of_sorted(transformed, uniform);
        } else if (config.q == 1) {
          ovl_stat = ks_of_sorted(transformed, uniform);
        } else {
          ovl_stat = dq_of_sorted(transformed, uniform, config.q);
        }
        const double ks_stat = ks_of_sorted(transformed, uniform);
        const double cvm_stat = cvm_of_sorted(transformed, uniform);
        ovl_reject[(std::size_t)t] =
            empirical_pvalue(ovl_table, ovl_stat) < config.alpha;
        ks_reject[(std::size_t)t] =
            empirical_pvalue(ks_table, ks_stat) < config.alpha;
        cvm_reject[(std::size_t)t] =
            empirical_pvalue(cvm_table, cvm_stat) < config.alpha;
      });

      const auto count = [](const std::vector<std::uint8_t>& flags) {
        return static_cast<int>(
            std::accumulate(flags.begin(), flags.end(), std::int64_t{0}));
      };
      const auto add_row = [&](const std::string& test, int rejections) {
        grid.rows.push_back({sampling.name(), reference.name(), n, test,
                             config.trials, rejections,
                             static_cast<double>(rejections) / config.trials});
      };
      add_row(ovl_name, count(ovl_reject));
      add_row("KS", count(ks_reject));
      add_row("CVM", count(cvm_reject));
      report(config.progress, "n=" + std::to_string(n) + " " + sampling.name() +
                                  " vs " + reference.name() + " done");
    }
  }
  return grid;
}

void write_power_csv(const PowerGrid& grid, std::ostream& out) {
  out << "sampling_dist,reference_dist,n,test,trials,rejections,power\n";
  for (const auto& row : grid.rows) {
    out << csv_field(row.sampling_dist) << ',' << csv_field(row.reference_dist)
        << ',' << row.n << ',' << row.test << ',' << row.trials << ','
        << row.rejections << ',' << format_number(row.power) << '\n';
  }
}

ConvergenceGrid run_convergence_study(const ConvergenceConfig& config) {
  if (config.reps < 1) throw std::invalid_argument("convergence study: reps must be >= 1");
  if (config.grid_points < 2) {
    throw std::invalid_argument("convergence study: need at least 2 grid points");
  }
  if (!(config.a_min > 0.0 && config.a_max > config.a_min)) {
    throw std::invalid_argument("convergence study: need 0 < a_min < a_max");
  }

  ConvergenceGrid grid;
  grid.rows.reserve(config.sizes.size() * (std::size_t)config.grid_points);
  for (int n : config.sizes) {
    report(config.progress, "sampling D_2 null, n=" + std::to_string(n));
    const NullTable table = build_null_table(
        2, n, config.reps,
        derive_seed(config.seed, {kConvergenceStream, (std::uint64_t)n}),
        config.threads);
    // sqrt(n) > 0, so scaling preserves the sort.
    std::vector<double> scaled(table.values.size());
    const double root_n = std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < scaled.size(); ++i) {
      scaled[i] = root_n * table.values[i];
    }
    const double step =
        (config.a_max - config.a_min) / static_cast<double>(config.grid_points - 1);
    for (int i = 0; i < config.grid_points; ++i) {
      const double a = config.a_min + step * static_cast<double>(i);
      const auto below =
          std::upper_bound(scaled.begin(), scaled.end(), a) - scaled.begin();
      grid.rows.push_back(
          {n, a, static_cast<double>(below) / static_cast<double>(config.reps),
           1.0 - asymptotic_sf_d2(a)});
    }
  }
  return grid;
}

void write_convergence_csv(const ConvergenceGrid& grid, std::ostream& out) {
  out << "n,a,empirical_cdf,asymptotic_cdf\n";
  for (const auto& row : grid.rows) {
    out << row.n << ',' << format_number(row.a) << ','
        << format_number(row.empirical_cdf) << ','
        << format_number(row.asymptotic_cdf) << '\n';
  }
}

}  // namespace ovlq
