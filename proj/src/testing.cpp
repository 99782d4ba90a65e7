#include "ovlq/testing.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace ovlq {

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string format_number(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

TestReport make_report(std::string name, double stat, double pvalue,
                       std::string method, double alpha) {
  TestReport report;
  report.test_name = std::move(name);
  report.statistic = stat;
  report.pvalue = pvalue;
  report.pvalue_method = std::move(method);
  report.alpha = alpha;
  report.reject = pvalue < alpha;
  return report;
}

void require_table(const NullTable& table, TableKind kind, int q, int n,
                   const char* caller) {
  if (table.kind != kind) {
    throw std::invalid_argument(std::string(caller) + ": wrong table kind");
  }
  if (kind == TableKind::OvlQ && table.q != q) {
    std::ostringstream os;
    os << caller << ": table has q=" << table.q << ", test needs q=" << q;
    throw std::invalid_argument(os.str());
  }
  if (table.n != n) {
    std::ostringstream os;
    os << caller << ": table has n=" << table.n << ", sample has n=" << n;
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

std::string to_json(const TestReport& report) {
  std::ostringstream os;
  os << "{\"test_name\":\"" << json_escape(report.test_name) << "\""
     << ",\"statistic\":" << format_number(report.statistic)
     << ",\"pvalue\":" << format_number(report.pvalue)
     << ",\"pvalue_method\":\"" << json_escape(report.pvalue_method) << "\""
     << ",\"alpha\":" << format_number(report.alpha)
     << ",\"reject\":" << (report.reject ? "true" : "false") << "}";
  return os.str();
}

TestReport ovlq_test(const EmpiricalSample& sample, const DistributionSpec& ref,
                     int q, double alpha, const NullTable& table) {
  if (q < 1) throw std::invalid_argument("ovlq_test: q must be >= 1");
  require_table(table, TableKind::OvlQ, q, sample.n(), "ovlq_test");
  const double stat = dq_statistic(sample, ref, q);
  const double pvalue = empirical_pvalue(table, stat);
  return make_report("OVLQ(" + std::to_string(q) + ")", stat, pvalue,
                     "MonteCarlo(" + table.id() + ")", alpha);
}

TestReport ovlq_test_asymptotic(const EmpiricalSample& sample,
                                const DistributionSpec& ref, int q,
                                double alpha) {
  if (q != 1 && q != 2) {
    throw std::invalid_argument(
        "ovlq_test_asymptotic: asymptotic p-values exist only for q = 1 or 2");
  }
  const double stat = dq_statistic(sample, ref, q);
  const double a = std::sqrt(static_cast<double>(sample.n())) * stat;
  const double pvalue =
      a > 0.0 ? (q == 1 ? asymptotic_sf_d1(a) : asymptotic_sf_d2(a)) : 1.0;
  return make_report("OVLQ(" + std::to_string(q) + ")", stat, pvalue,
                     "Asymptotic", alpha);
}

TestReport ks_test(const EmpiricalSample& sample, const DistributionSpec& ref,
                   double alpha, const NullTable& table) {
  require_table(table, TableKind::OvlQ, 1, sample.n(), "ks_test");
  const double stat = ks_statistic(sample, ref);
  return make_report("KS", stat, empirical_pvalue(table, stat),
                     "MonteCarlo(" + table.id() + ")", alpha);
}

TestReport ks_test_asymptotic(const EmpiricalSample& sample,
                              const DistributionSpec& ref, double alpha) {
  const double stat = ks_statistic(sample, ref);
  const double a = std::sqrt(static_cast<double>(sample.n())) * stat;
  const double pvalue = a > 0.0 ? asymptotic_sf_d1(a) : 1.0;
  return make_report("KS", stat, pvalue, "Asymptotic", alpha);
}

double cvm_of_sorted(std::span<const double> sorted, const DistributionSpec& ref) {
  const double n = static_cast<double>(sorted.size());
  double w2 = 1.0 / (12.0 * n);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double midpoint = (2.0 * static_cast<double>(i) + 1.0) / (2.0 * n);
    const double d = midpoint - cdf(ref, sorted[i]);
    w2 += d * d;
  }
  return w2;
}

double cvm_statistic(const EmpiricalSample& sample, const DistributionSpec& ref) {
  return cvm_of_sorted(sample.values(), ref);
}

NullTable build_cvm_null_table(int n, int reps, std::uint64_t seed, int threads) {
  const DistributionSpec uniform = DistributionSpec::uniform01();
  return build_null_table_with(
      TableKind::Cvm, 0, n, reps, seed,
      [uniform](std::span<const double> s) { return cvm_of_sorted(s, uniform); },
      threads);
}

TestReport cvm_test(const EmpiricalSample& sample, const DistributionSpec& ref,
                    double alpha, const NullTable& table) {
  require_table(table, TableKind::Cvm, 0, sample.n(), "cvm_test");
  const double stat = cvm_statistic(sample, ref);
  return make_report("CVM", stat, empirical_pvalue(table, stat),
                     "MonteCarlo(" + table.id() + ")", alpha);
}

}  // namespace ovlq
