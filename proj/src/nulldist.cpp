#include "ovlq/nulldist.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ovlq/parallel.hpp"

namespace ovlq {

namespace {

double clamp_unit(double x) { return std::min(std::max(x, 0.0), 1.0); }

constexpr int kMaxTerms = 100;
constexpr double kTermCutoff = 1e-16;
constexpr double kSmallA = 0.4;

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static const char hex[] = "0123456789abcdef";
  std::string out(2 * length, '0');
  for (unsigned int i = 0; i < length; ++i) {
    out[2 * i] = hex[digest[i] >> 4];
    out[2 * i + 1] = hex[digest[i] & 0xf];
  }
  return out;
}

std::string format_value(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

}  // namespace

double asymptotic_sf_d2(double a) {
  if (!(a > 0.0)) throw std::domain_error("asymptotic_sf_d2: a must be > 0");
  if (a < kSmallA) return 1.0;
  double sum = 0.0;
  for (int i = 1; i <= kMaxTerms; ++i) {
    const double sq = (i * a) * (i * a);
    const double term = 2.0 * (4.0 * sq - 1.0) * std::exp(-2.0 * sq);
    sum += term;
    // The leading factor crosses zero at 4 a^2 = 1 (a = 0.5), so a tiny
    // first term says nothing about the tail; trust the magnitude cutoff
    // only once the exponential decay has taken over.
    if (i >= 2 && std::abs(term) < kTermCutoff) break;
  }
  return clamp_unit(sum);
}

double asymptotic_sf_d1(double a) {
  if (!(a > 0.0)) throw std::domain_error("asymptotic_sf_d1: a must be > 0");
  // The alternating series needs on the order of 1/a terms; below 0.2 the
  // 100-term cap cannot reach it, while the true survival probability is
  // within 5e-13 of 1 there.
  if (a < 0.2) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int i = 1; i <= kMaxTerms; ++i) {
    const double sq = (i * a) * (i * a);
    const double term = 2.0 * std::exp(-2.0 * sq);
    sum += sign * term;
    if (term < kTermCutoff) break;
    sign = -sign;
  }
  return clamp_unit(sum);
}

std::string NullTable::id() const {
  std::ostringstream os;
  if (kind == TableKind::Cvm) {
    os << "cvm,";
  } else {
    os << "q=" << q << ",";
  }
  os << "n=" << n << ",reps=" << reps << ",seed=" << seed;
  return os.str();
}

NullTable build_null_table_with(TableKind kind, int q, int n, int reps,
                                std::uint64_t seed, const SortedSampleStat& stat,
                                int threads) {
  if (n < 1) throw std::invalid_argument("build_null_table: n must be >= 1");
  if (reps < 1) throw std::invalid_argument("build_null_table: reps must be >= 1");
  NullTable table{kind, q, n, reps, seed, {}};
  table.values.resize(static_cast<std::size_t>(reps));
  const DistributionSpec uniform = DistributionSpec::uniform01();
  parallel_for(0, reps, threads, [&](std::int64_t rep) {
    thread_local std::vector<double> buffer;
    sample_into(uniform, n, mix_seed(seed, static_cast<std::uint64_t>(rep)),
                buffer);
    table.values[static_cast<std::size_t>(rep)] = stat(buffer);
  });
  std::sort(table.values.begin(), table.values.end());
  return table;
}

NullTable build_null_table(int q, int n, int reps, std::uint64_t seed,
                           int threads) {
  if (q < 1) throw std::invalid_argument("build_null_table: q must be >= 1");
  const DistributionSpec uniform = DistributionSpec::uniform01();
  SortedSampleStat stat;
  // D_1 and D_2 have allocation-free kernels; the general q path builds the
  // event vector per replicate.
  if (q == 1) {
    stat = [uniform](std::span<const double> s) { return ks_of_sorted(s, uniform); };
  } else if (q == 2) {
    stat = [uniform](std::span<const double> s) { return d2_of_sorted(s, uniform); };
  } else {
    stat = [uniform, q](std::span<const double> s) {
      return dq_of_sorted(s, uniform, q);
    };
  }
  return build_null_table_with(TableKind::OvlQ, q, n, reps, seed, stat, threads);
}

double empirical_pvalue(const NullTable& table, double stat) {
  if (table.values.empty()) throw std::invalid_argument("empirical_pvalue: empty table");
  const auto first_ge =
      std::lower_bound(table.values.begin(), table.values.end(), stat);
  const auto count_ge = table.values.end() - first_ge;
  return static_cast<double>(count_ge) / static_cast<double>(table.values.size());
}

double critical_value(const NullTable& table, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("critical_value: alpha must be in (0,1)");
  }
  if (table.values.empty()) throw std::invalid_argument("critical_value: empty table");
  // With R sorted values, p(x) = #{v >= x}/R equals (R-k)/R on (v_k, v_k+1],
  // so inf{x : p(x) < alpha} is v_k for the smallest k with (R-k)/R < alpha
  // (in exact arithmetic k = floor((1-alpha) R) + 1). The predicate uses the
  // same division as empirical_pvalue, which keeps the pair consistent at
  // rounding boundaries: p(value) >= alpha and p(x) < alpha for x > value.
  const std::size_t r = table.values.size();
  const auto p_above = [&](std::size_t k) {
    return static_cast<double>(r - k) / static_cast<double>(r);
  };
  std::size_t lo = 1, hi = r;  // p_above(r) = 0 < alpha always holds
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (p_above(mid) < alpha) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return table.values[lo - 1];
}

void save_table(const NullTable& table, const std::filesystem::path& path) {
  if (table.kind != TableKind::OvlQ) {
    throw std::invalid_argument("save_table: only OVL-q tables have a file format");
  }
  if (static_cast<int>(table.values.size()) != table.reps) {
    throw std::invalid_argument("save_table: reps does not match value count");
  }
  std::string body;
  body.reserve(table.values.size() * 25);
  for (double v : table.values) {
    body += format_value(v);
    body += '\n';
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << "ovlq-null-table v1\n"
      << "q=" << table.q << "\n"
      << "n=" << table.n << "\n"
      << "reps=" << table.reps << "\n"
      << "seed=" << table.seed << "\n"
      << "sha256=" << sha256_hex(body) << "\n"
      << body;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

namespace {

std::string expect_line(std::istream& in, const std::filesystem::path& path) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("truncated table file: " + path.string());
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::string expect_field(std::istream& in, std::string_view key,
                         const std::filesystem::path& path) {
  const std::string line = expect_line(in, path);
  if (line.size() < key.size() + 1 || line.compare(0, key.size(), key) != 0 ||
      line[key.size()] != '=') {
    throw std::runtime_error("table file " + path.string() + ": expected '" +
                             std::string(key) + "=...', got '" + line + "'");
  }
  return line.substr(key.size() + 1);
}

template <typename T>
T parse_integer(const std::string& text, std::string_view key,
                const std::filesystem::path& path) {
  T value{};
  const auto result =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw std::runtime_error("table file " + path.string() + ": bad " +
                             std::string(key) + " value '" + text + "'");
  }
  return value;
}

}  // namespace

NullTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open table file: " + path.string());

  const std::string magic = expect_line(in, path);
  if (magic != "ovlq-null-table v1") {
    throw std::runtime_error("table file " + path.string() +
                             ": unsupported format '" + magic + "'");
  }
  NullTable table;
  table.kind = TableKind::OvlQ;
  table.q = parse_integer<int>(expect_field(in, "q", path), "q", path);
  table.n = parse_integer<int>(expect_field(in, "n", path), "n", path);
  table.reps = parse_integer<int>(expect_field(in, "reps", path), "reps", path);
  table.seed = parse_integer<std::uint64_t>(expect_field(in, "seed", path),
                                            "seed", path);
  const std::string checksum = expect_field(in, "sha256", path);
  if (table.q < 1 || table.n < 1 || table.reps < 1) {
    throw std::runtime_error("table file " + path.string() +
                             ": q, n, reps must be positive");
  }

  std::string body;
  body.reserve(static_cast<std::size_t>(table.reps) * 25);
  table.values.reserve(static_cast<std::size_t>(table.reps));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    body += line;
    body += '\n';
    double value = 0.0;
    const char* begin = line.data();
    const char* end = begin + line.size();
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc() || result.ptr != end) {
      throw std::runtime_error("table file " + path.string() +
                               ": bad value line '" + line + "'");
    }
    table.values.push_back(value);
  }
  if (static_cast<int>(table.values.size()) != table.reps) {
    std::ostringstream os;
    os << "table file " << path.string() << ": expected " << table.reps
       << " values, found " << table.values.size();
    throw std::runtime_error(os.str());
  }
  if (sha256_hex(body) != checksum) {
    throw std::runtime_error("table file " + path.string() + ": checksum mismatch");
  }
  if (!std::is_sorted(table.values.begin(), table.values.end())) {
    throw std::runtime_error("table file " + path.string() + ": values not sorted");
  }
  for (double v : table.values) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::runtime_error("table file " + path.string() +
                               ": value out of [0,1]");
    }
  }
  return table;
}

}  // namespace ovlq
