// Command-line front end: statistics, hypothesis tests, null-table
// management, and the power/convergence experiments.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "ovlq/experiments.hpp"

namespace {

using namespace ovlq;

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string format_number(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + out_path);
  out << text;
  if (!out) throw DataError("write failed: " + out_path);
}

// Sample source shared by `stat` and `test`: either a file or a generated
// sample from (--dist, --n, --seed).
struct SampleSource {
  std::string file;
  std::string dist;
  int n = 0;
  std::optional<std::uint64_t> seed;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--sample", file, "sample file, one value per line");
    cmd->add_option("--dist", dist, "sampling distribution for a generated sample");
    cmd->add_option("--n", n, "generated sample size");
    cmd->add_option("--seed", seed, "generator seed (also seeds derived streams)");
  }

  EmpiricalSample load() const {
    if (!file.empty()) {
      if (!dist.empty()) {
        throw std::invalid_argument("give either --sample or --dist, not both");
      }
      return load_sample_file(file);
    }
    if (dist.empty()) {
      throw std::invalid_argument("need a sample: --sample FILE or --dist/--n/--seed");
    }
    if (n < 1) throw std::invalid_argument("--n must be >= 1 for a generated sample");
    if (!seed) throw std::invalid_argument("--seed is required for a generated sample");
    return sample(parse_distribution(dist), n, *seed);
  }
};

void add_stat_command(CLI::App& app) {
  auto* cmd = app.add_subcommand("stat", "print D_q(F_n, F) for a sample");
  auto source = std::make_shared<SampleSource>();
  auto ref_name = std::make_shared<std::string>();
  auto q = std::make_shared<int>(2);
  auto out_path = std::make_shared<std::string>();
  source->add_options(cmd);
  cmd->add_option("--ref", *ref_name, "reference distribution")->required();
  cmd->add_option("--q", *q, "statistic order, q >= 1")->default_val(2);
  cmd->add_option("--out", *out_path, "output path (default stdout)");
  cmd->callback([=] {
    const DistributionSpec ref = parse_distribution(*ref_name);
    const EmpiricalSample s = source->load();
    write_output(format_number(dq_statistic(s, ref, *q)) + "\n", *out_path);
  });
}

void add_test_command(CLI::App& app) {
  auto* cmd = app.add_subcommand("test", "run a goodness-of-fit test");
  auto source = std::make_shared<SampleSource>();
  auto test_name = std::make_shared<std::string>("ovlq");
  auto ref_name = std::make_shared<std::string>();
  auto q = std::make_shared<int>(2);
  auto alpha = std::make_shared<double>(0.05);
  auto method = std::make_shared<std::string>("mc");
  auto table_path = std::make_shared<std::string>();
  auto table_reps = std::make_shared<int>(100000);
  auto table_seed = std::make_shared<std::optional<std::uint64_t>>();
  auto rebuild = std::make_shared<bool>(false);
  auto threads = std::make_shared<int>(0);
  auto out_path = std::make_shared<std::string>();

  source->add_options(cmd);
  cmd->add_option("--test", *test_name, "ovlq | ks | cvm")
      ->check(CLI::IsMember({"ovlq", "ks", "cvm"}));
  cmd->add_option("--ref", *ref_name, "reference distribution")->required();
  cmd->add_option("--q", *q, "OVL order (ovlq test only)")->default_val(2);
  cmd->add_option("--alpha", *alpha, "significance level")->default_val(0.05);
  cmd->add_option("--method", *method, "mc | asymptotic")
      ->check(CLI::IsMember({"mc", "asymptotic"}));
  cmd->add_option("--table", *table_path, "null-table file (ovlq/ks only)");
  cmd->add_option("--table-reps", *table_reps, "replicates when building a table")
      ->default_val(100000);
  cmd->add_option("--table-seed", *table_seed,
                  "table seed (default: derived from --seed)");
  cmd->add_flag("--rebuild", *rebuild,
                "regenerate a mismatched --table file instead of refusing");
  cmd->add_option("--threads", *threads, "worker threads (0 = auto)");
  cmd->add_option("--out", *out_path, "output path (default stdout)");

  cmd->callback([=] {
    const DistributionSpec ref = parse_distribution(*ref_name);
    const EmpiricalSample s = source->load();
    const int effective_q = *test_name == "ks" ? 1 : *q;

    TestReport report;
    if (*method == "asymptotic") {
      if (*test_name == "cvm") {
        throw std::invalid_argument("cvm p-values are Monte-Carlo only");
      }
      report = *test_name == "ks"
                   ? ks_test_asymptotic(s, ref, *alpha)
                   : ovlq_test_asymptotic(s, ref, effective_q, *alpha);
    } else {
      const auto pick_table_seed = [&]() -> std::uint64_t {
        if (*table_seed) return **table_seed;
        if (source->seed) return derive_seed(*source->seed, {0xbadde5});
        throw std::invalid_argument(
            "building a null table needs --table-seed (or --seed)");
      };

      NullTable table;
      if (*test_name == "cvm") {
        if (!table_path->empty()) {
          throw std::invalid_argument(
              "cvm tables are in-memory only; omit --table");
        }
        table = build_cvm_null_table(s.n(), *table_reps, pick_table_seed(),
                                     *threads);
      } else if (!table_path->empty()) {
        table = load_table(*table_path);
        if (table.q != effective_q || table.n != s.n()) {
          if (!*rebuild) {
            std::ostringstream os;
            os << "table " << *table_path << " has (q=" << table.q
               << ", n=" << table.n << ") but the test needs (q=" << effective_q
               << ", n=" << s.n() << "); pass --rebuild to regenerate it";
            throw DataError(os.str());
          }
          table = build_null_table(effective_q, s.n(), *table_reps,
                                   pick_table_seed(), *threads);
          save_table(table, *table_path);
        }
      } else {
        table = build_null_table(effective_q, s.n(), *table_reps,
                                 pick_table_seed(), *threads);
      }

      report = *test_name == "cvm" ? cvm_test(s, ref, *alpha, table)
               : *test_name == "ks"
                   ? ks_test(s, ref, *alpha, table)
                   : ovlq_test(s, ref, effective_q, *alpha, table);
    }
    write_output(to_json(report) + "\n", *out_path);
  });
}

void add_null_table_command(CLI::App& app) {
  auto* cmd = app.add_subcommand("null-table", "build and save a D_q null table");
  auto q = std::make_shared<int>(2);
  auto n = std::make_shared<int>();
  auto reps = std::make_shared<int>();
  auto seed = std::make_shared<std::uint64_t>();
  auto threads = std::make_shared<int>(0);
  auto out_path = std::make_shared<std::string>();
  cmd->add_option("--q", *q, "statistic order")->default_val(2);
  cmd->add_option("--n", *n, "sample size")->required();
  cmd->add_option("--reps", *reps, "Monte-Carlo replicates")->required();
  cmd->add_option("--seed", *seed, "master seed")->required();
  cmd->add_option("--threads", *threads, "worker threads (0 = auto)");
  cmd->add_option("--out", *out_path, "output file")->required();
  cmd->callback([=] {
    save_table(build_null_table(*q, *n, *reps, *seed, *threads), *out_path);
  });
}

std::vector<std::pair<DistributionSpec, DistributionSpec>> parse_pairs(
    const std::string& text) {
  if (text == "default") return default_power_pairs();
  std::vector<std::pair<DistributionSpec, DistributionSpec>> pairs;
  std::stringstream stream(text);
  std::string entry;
  while (std::getline(stream, entry, ';')) {
    if (entry.empty()) continue;
    const auto colon = entry.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("--pairs entry '" + entry +
                                  "' is not of the form SAMPLING:REFERENCE");
    }
    pairs.emplace_back(parse_distribution(entry.substr(0, colon)),
                       parse_distribution(entry.substr(colon + 1)));
  }
  if (pairs.empty()) throw std::invalid_argument("--pairs is empty");
  return pairs;
}

std::string power_grid_json(const PowerGrid& grid) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < grid.rows.size(); ++i) {
    const auto& row = grid.rows[i];
    if (i) os << ",";
    os << "\n{\"sampling_dist\":\"" << row.sampling_dist
       << "\",\"reference_dist\":\"" << row.reference_dist
       << "\",\"n\":" << row.n << ",\"test\":\"" << row.test
       << "\",\"trials\":" << row.trials << ",\"rejections\":" << row.rejections
       << ",\"power\":" << format_number(row.power) << "}";
  }
  os << "\n]\n";
  return os.str();
}

std::string convergence_grid_json(const ConvergenceGrid& grid) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < grid.rows.size(); ++i) {
    const auto& row = grid.rows[i];
    if (i) os << ",";
    os << "\n{\"n\":" << row.n << ",\"a\":" << format_number(row.a)
       << ",\"empirical_cdf\":" << format_number(row.empirical_cdf)
       << ",\"asymptotic_cdf\":" << format_number(row.asymptotic_cdf) << "}";
  }
  os << "\n]\n";
  return os.str();
}

void add_power_command(CLI::App& app) {
  auto* cmd = app.add_subcommand("power", "statistical-power study over distribution pairs");
  auto pairs_text = std::make_shared<std::string>("default");
  auto cfg = std::make_shared<PowerStudyConfig>();
  auto full_scale = std::make_shared<bool>(false);
  auto format = std::make_shared<std::string>("csv");
  auto out_path = std::make_shared<std::string>();

  cmd->add_option("--pairs", *pairs_text,
                  "'default' or 'SAMPLING:REFERENCE;...' entries");
  auto* sizes_opt =
      cmd->add_option("--sizes", cfg->sizes, "sample sizes")->delimiter(',');
  auto* trials_opt = cmd->add_option("--trials", cfg->trials, "trials per cell");
  cmd->add_option("--table-reps", cfg->table_reps, "null-table replicates");
  cmd->add_option("--alpha", cfg->alpha, "significance level");
  cmd->add_option("--q", cfg->q, "OVL order entrant");
  cmd->add_option("--seed", cfg->seed, "master seed")->required();
  cmd->add_option("--threads", cfg->threads, "worker threads (0 = auto)");
  cmd->add_flag("--full-scale", *full_scale,
                "100000 trials over n = 8..4096 (hours of compute)");
  cmd->add_option("--format", *format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", *out_path, "output path (default stdout)");

  cmd->callback([=] {
    if (*full_scale) {
      if (!trials_opt->count()) cfg->trials = 100000;
      if (!sizes_opt->count()) {
        cfg->sizes = {8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096};
      }
    }
    cfg->pairs = parse_pairs(*pairs_text);
    cfg->progress = [](const std::string& message) {
      std::cerr << message << "\n";
    };
    const PowerGrid grid = run_power_study(*cfg);
    if (*format == "json") {
      write_output(power_grid_json(grid), *out_path);
    } else {
      std::ostringstream os;
      write_power_csv(grid, os);
      write_output(os.str(), *out_path);
    }
  });
}

void add_convergence_command(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "convergence", "empirical vs asymptotic CDF of sqrt(n) D_2 under H0");
  auto cfg = std::make_shared<ConvergenceConfig>();
  auto format = std::make_shared<std::string>("csv");
  auto out_path = std::make_shared<std::string>();

  cmd->add_option("--sizes", cfg->sizes, "sample sizes")->delimiter(',');
  cmd->add_option("--reps", cfg->reps, "replicates per sample size");
  cmd->add_option("--grid", cfg->grid_points, "grid points over [a-min, a-max]");
  cmd->add_option("--a-min", cfg->a_min, "grid lower end");
  cmd->add_option("--a-max", cfg->a_max, "grid upper end");
  cmd->add_option("--seed", cfg->seed, "master seed")->required();
  cmd->add_option("--threads", cfg->threads, "worker threads (0 = auto)");
  cmd->add_option("--format", *format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", *out_path, "output path (default stdout)");

  cmd->callback([=] {
    cfg->progress = [](const std::string& message) {
      std::cerr << message << "\n";
    };
    const ConvergenceGrid grid = run_convergence_study(*cfg);
    if (*format == "json") {
      write_output(convergence_grid_json(grid), *out_path);
    } else {
      std::ostringstream os;
      write_convergence_csv(grid, os);
      write_output(os.str(), *out_path);
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-sample OVL-q goodness-of-fit tests"};
  app.require_subcommand(1);
  add_stat_command(app);
  add_test_command(app);
  add_null_table_command(app);
  add_power_command(app);
  add_convergence_command(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
