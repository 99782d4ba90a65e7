#include "ovlq/distributions.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ovlq {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488016887242097;

// Mixture components are fixed by construction.
constexpr double kMixMu = 0.8;
constexpr double kMixSigma = 0.6;

// Trapezoidal CDF breakpoints: mass of one triangular flank and its
// complement. cdf(-sqrt(2)) = (3 - 2 sqrt(2)) / 2, cdf(sqrt(2)) symmetric.
const double kTrapFlankMass = (3.0 - 2.0 * kSqrt2) / 2.0;
const double kTrapMidSlope = (2.0 - kSqrt2) / 2.0;  // flat density height

double trapezoidal_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  if (x <= -kSqrt2) {
    const double t = x + 2.0;
    return t * t / 4.0;
  }
  if (x < kSqrt2) return kTrapFlankMass + (x + kSqrt2) * kTrapMidSlope;
  const double t = 2.0 - x;
  return 1.0 - t * t / 4.0;
}

}  // namespace

double standard_normal_cdf(double z) {
  return 0.5 * std::erfc(-z / kSqrt2);
}

DistributionSpec DistributionSpec::normal(double mu, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mu)) {
    throw std::invalid_argument("normal: sigma must be finite and > 0");
  }
  return {DistKind::Normal, mu, sigma};
}

std::string DistributionSpec::name() const {
  switch (kind) {
    case DistKind::Uniform01:
      return "uniform";
    case DistKind::Normal: {
      std::ostringstream os;
      os << "normal(" << mu << "," << sigma << ")";
      return os.str();
    }
    case DistKind::Trapezoidal:
      return "trapezoidal";
    case DistKind::Mixture:
      return "mixture";
  }
  return "?";
}

DistributionSpec parse_distribution(std::string_view text) {
  std::string s;
  s.reserve(text.size());
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (s == "uniform") return DistributionSpec::uniform01();
  if (s == "trapezoidal") return DistributionSpec::trapezoidal();
  if (s == "mixture") return DistributionSpec::mixture();
  if (s.rfind("normal(", 0) == 0 && s.back() == ')') {
    const std::string args = s.substr(7, s.size() - 8);
    const auto comma = args.find(',');
    if (comma != std::string::npos) {
      try {
        const double mu = std::stod(args.substr(0, comma));
        const double sigma = std::stod(args.substr(comma + 1));
        return DistributionSpec::normal(mu, sigma);
      } catch (const std::invalid_argument&) {
        // fall through to the common error
      } catch (const std::out_of_range&) {
      }
    }
  }
  throw std::invalid_argument(
      "unknown distribution '" + std::string(text) +
      "' (expected uniform, normal(mu,sigma), trapezoidal, or mixture)");
}

double cdf(const DistributionSpec& spec, double x) {
  switch (spec.kind) {
    case DistKind::Uniform01:
      return std::max(0.0, std::min(x, 1.0));
    case DistKind::Normal:
      if (!(spec.sigma > 0.0)) throw std::invalid_argument("cdf: sigma must be > 0");
      return standard_normal_cdf((x - spec.mu) / spec.sigma);
    case DistKind::Trapezoidal:
      return trapezoidal_cdf(x);
    case DistKind::Mixture:
      return 0.5 * (standard_normal_cdf((x + kMixMu) / kMixSigma) +
                    standard_normal_cdf((x - kMixMu) / kMixSigma));
  }
  throw std::invalid_argument("cdf: bad distribution kind");
}

double trapezoidal_quantile(double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw std::invalid_argument("trapezoidal_quantile: u must be in [0,1]");
  }
  if (u <= kTrapFlankMass) return -2.0 + 2.0 * std::sqrt(u);
  if (u >= 1.0 - kTrapFlankMass) return 2.0 - 2.0 * std::sqrt(1.0 - u);
  return -kSqrt2 + (u - kTrapFlankMass) / kTrapMidSlope;
}

EmpiricalSample::EmpiricalSample(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("sample must not be empty");
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("sample values must be finite");
  }
  std::sort(values_.begin(), values_.end());
}

void sample_into(const DistributionSpec& spec, int n, std::uint64_t seed,
                 std::vector<double>& out) {
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  out.resize(static_cast<std::size_t>(n));
  Xoshiro256pp rng(seed);
  switch (spec.kind) {
    case DistKind::Uniform01:
      for (double& v : out) v = rng.next_double();
      break;
    case DistKind::Normal:
      if (!(spec.sigma > 0.0)) throw std::invalid_argument("sample: sigma must be > 0");
      for (double& v : out) v = spec.mu + spec.sigma * normal_standard(rng);
      break;
    case DistKind::Trapezoidal:
      for (double& v : out) v = trapezoidal_quantile(rng.next_double());
      break;
    case DistKind::Mixture:
      // Fair coin picks the component, then one normal draw (three uniforms
      // per value in total).
      for (double& v : out) {
        const double center = rng.next_double() < 0.5 ? -kMixMu : kMixMu;
        v = center + kMixSigma * normal_standard(rng);
      }
      break;
  }
  std::sort(out.begin(), out.end());
}

EmpiricalSample sample(const DistributionSpec& spec, int n, std::uint64_t seed) {
  std::vector<double> values;
  sample_into(spec, n, seed, values);
  return EmpiricalSample(std::move(values));
}

double ecdf(const EmpiricalSample& sample, double x) {
  const auto& v = sample.values();
  const auto count = std::upper_bound(v.begin(), v.end(), x) - v.begin();
  return static_cast<double>(count) / static_cast<double>(v.size());
}

EmpiricalSample load_sample_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sample file: " + path.string());
  std::vector<double> values;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(first, last - first + 1);

    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    if (begin != end && *begin == '+') ++begin;  // from_chars rejects a leading '+'
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc() || result.ptr != end || !std::isfinite(value)) {
      std::ostringstream os;
      os << path.string() << ":" << lineno << ": expected a decimal value, got '"
         << token << "'";
      throw std::runtime_error(os.str());
    }
    values.push_back(value);
  }
  if (values.empty()) {
    throw std::runtime_error("sample file has no values: " + path.string());
  }
  return EmpiricalSample(std::move(values));
}

}  // namespace ovlq
