// End-to-end checks of the ovlq binary; each case shells out to the real
// executable (path injected by the build).

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <doctest.h>

#include "ovlq/nulldist.hpp"

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / name;
}

CliResult run_cli(const std::string& args) {
  const fs::path out = temp_file("ovlq_cli_stdout.txt");
  const fs::path err = temp_file("ovlq_cli_stderr.txt");
  const std::string command = std::string(OVLQ_CLI_PATH) + " " + args + " >" +
                              out.string() + " 2>" + err.string();
  const int status = std::system(command.c_str());
  CliResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out);
  result.err = slurp(err);
  return result;
}

fs::path write_sample(const std::string& name, const std::string& content) {
  const fs::path path = temp_file(name);
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("cli stat prints statistics and is deterministic") {
  const auto one = write_sample("cli_one.txt", "0.5\n");
  auto result = run_cli("stat --q 2 --ref uniform --sample " + one.string());
  CHECK(result.exit_code == 0);
  CHECK(result.out == "1\n");

  result = run_cli("stat --q 1 --ref uniform --sample " + one.string());
  CHECK(result.out == "0.5\n");

  const std::string generated =
      "stat --q 2 --ref 'normal(0,1)' --dist mixture --n 50 --seed 9";
  const auto first = run_cli(generated);
  const auto second = run_cli(generated);
  CHECK(first.exit_code == 0);
  CHECK(first.out == second.out);
}

TEST_CASE("cli null-table writes a loadable file that matches the library") {
  const auto path = temp_file("cli_table.tbl");
  const auto result = run_cli("null-table --q 2 --n 8 --reps 100 --seed 7 --out " +
                              path.string());
  CHECK(result.exit_code == 0);
  const ovlq::NullTable loaded = ovlq::load_table(path);
  const ovlq::NullTable built = ovlq::build_null_table(2, 8, 100, 7);
  CHECK(loaded.values == built.values);

  const auto sample8 = write_sample(
      "cli_eight.txt", "0.05\n0.1\n0.2\n0.3\n0.6\n0.7\n0.8\n0.95\n");
  const auto tested = run_cli("test --table " + path.string() +
                              " --ref uniform --q 2 --sample " + sample8.string());
  CHECK(tested.exit_code == 0);
  CHECK(tested.out.find("\"pvalue_method\":\"MonteCarlo(q=2,n=8,reps=100,seed=7)\"") !=
        std::string::npos);
  CHECK(tested.out.find("\"test_name\":\"OVLQ(2)\"") != std::string::npos);
}

TEST_CASE("cli test refuses mismatched tables unless --rebuild") {
  const auto path = temp_file("cli_mismatch.tbl");
  REQUIRE(run_cli("null-table --q 2 --n 4 --reps 60 --seed 3 --out " + path.string())
              .exit_code == 0);
  const auto two = write_sample("cli_two.txt", "0.25\n0.75\n");
  const auto refused = run_cli("test --table " + path.string() +
                               " --ref uniform --q 2 --sample " + two.string());
  CHECK(refused.exit_code == 2);
  CHECK(refused.err.find("--rebuild") != std::string::npos);

  const auto rebuilt = run_cli("test --table " + path.string() +
                               " --ref uniform --q 2 --sample " + two.string() +
                               " --rebuild --table-seed 5 --table-reps 80");
  CHECK(rebuilt.exit_code == 0);
  const ovlq::NullTable refreshed = ovlq::load_table(path);
  CHECK(refreshed.n == 2);
  CHECK(refreshed.reps == 80);
}

TEST_CASE("cli test asymptotic path needs no seed") {
  const auto one = write_sample("cli_asym.txt", "0.5\n");
  const auto result = run_cli("test --method asymptotic --ref uniform --q 2 --sample " +
                              one.string());
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("\"pvalue_method\":\"Asymptotic\"") != std::string::npos);

  const auto cvm_asym = run_cli("test --test cvm --method asymptotic --ref uniform --sample " +
                                one.string());
  CHECK(cvm_asym.exit_code == 1);

  const auto cvm = run_cli("test --test cvm --ref uniform --sample " + one.string() +
                           " --table-seed 11 --table-reps 200");
  CHECK(cvm.exit_code == 0);
  CHECK(cvm.out.find("\"test_name\":\"CVM\"") != std::string::npos);
}

TEST_CASE("cli error paths use the documented exit codes") {
  // missing --seed on an experiment command is a usage error
  CHECK(run_cli("power --trials 200 --sizes 8").exit_code == 1);
  CHECK(run_cli("convergence --reps 100").exit_code == 1);

  // unknown distribution
  const auto one = write_sample("cli_err.txt", "0.5\n");
  CHECK(run_cli("stat --ref cauchy --sample " + one.string()).exit_code == 1);

  // unreadable sample file is a data error
  CHECK(run_cli("stat --ref uniform --sample /no/such/file.txt").exit_code == 2);

  // non-numeric line reports its number on stderr
  const auto bad = write_sample("cli_bad.txt", "0.5\nx\n");
  const auto result = run_cli("stat --ref uniform --sample " + bad.string());
  CHECK(result.exit_code == 2);
  CHECK(result.err.find(":2:") != std::string::npos);

  // building a monte-carlo table without any seed is a usage error
  CHECK(run_cli("test --ref uniform --sample " + one.string()).exit_code == 1);
}

TEST_CASE("cli power emits the documented csv") {
  const auto out = temp_file("cli_power.csv");
  const auto result = run_cli(
      "power --pairs default --sizes 8 --trials 120 --table-reps 400 --seed 1 --out " +
      out.string());
  CHECK(result.exit_code == 0);
  const std::string csv = slurp(out);
  CHECK(csv.rfind("sampling_dist,reference_dist,n,test,trials,rejections,power\n",
                  0) == 0);
  int lines = 0;
  for (char c : csv) lines += c == '\n';
  CHECK(lines == 1 + 6 * 3);  // header + six default pairs, three tests

  const auto pair_run = run_cli(
      "power --pairs \"trapezoidal:mixture;mixture:trapezoidal\" --sizes 8 "
      "--trials 120 --table-reps 400 --seed 1 --format json");
  CHECK(pair_run.exit_code == 0);
  CHECK(pair_run.out.find("\"test\":\"OVL-2\"") != std::string::npos);
}

TEST_CASE("cli --threads does not change results") {
  const auto serial = temp_file("cli_t1.tbl");
  const auto parallel = temp_file("cli_t3.tbl");
  REQUIRE(run_cli("null-table --q 2 --n 16 --reps 300 --seed 21 --threads 1 --out " +
                  serial.string())
              .exit_code == 0);
  REQUIRE(run_cli("null-table --q 2 --n 16 --reps 300 --seed 21 --threads 3 --out " +
                  parallel.string())
              .exit_code == 0);
  CHECK(slurp(serial) == slurp(parallel));
}

TEST_CASE("cli convergence emits the documented csv") {
  const auto result =
      run_cli("convergence --sizes 8 --reps 400 --grid 11 --seed 5");
  CHECK(result.exit_code == 0);
  CHECK(result.out.rfind("n,a,empirical_cdf,asymptotic_cdf\n", 0) == 0);
  int lines = 0;
  for (char c : result.out) lines += c == '\n';
  CHECK(lines == 1 + 11);
}
