#include "longeval/stats/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "longeval/error.hpp"

namespace longeval::stats {

CorrelationMethod parse_correlation(std::string_view text) {
  if (text == "pearson") return CorrelationMethod::Pearson;
  if (text == "kendall") return CorrelationMethod::Kendall;
  throw ValidationError("correlation method must be pearson or kendall, got \"" + std::string(text) + "\"");
}

std::string_view to_string(CorrelationMethod method) {
  return method == CorrelationMethod::Pearson ? "pearson" : "kendall";
}

namespace {

void check_lengths(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("correlation of vectors with different lengths");
  if (a.size() < 2) throw ValidationError("correlation needs at least 2 points");
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

double pearson(std::span<const double> a, std::span<const double> b) {
  check_lengths(a, b);
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) throw UndefinedStatistic("Pearson correlation undefined: zero variance");
  const double r = sab / std::sqrt(saa * sbb);
  return std::max(-1.0, std::min(1.0, r));
}

double kendall_tau(std::span<const double> a, std::span<const double> b) {
  check_lengths(a, b);
  const std::size_t n = a.size();
  long long score = 0;      // concordant - discordant
  long long tied_a = 0;     // pairs tied in a
  long long tied_b = 0;     // pairs tied in b
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const int sa = sign(a[i] - a[j]);
      const int sb = sign(b[i] - b[j]);
      if (sa == 0) ++tied_a;
      if (sb == 0) ++tied_b;
      score += sa * sb;
    }
  }
  const long long pairs = static_cast<long long>(n * (n - 1) / 2);
  const double denom = std::sqrt(static_cast<double>(pairs - tied_a) * static_cast<double>(pairs - tied_b));
  if (denom == 0.0) throw UndefinedStatistic("Kendall tau undefined: a vector is entirely tied");
  return static_cast<double>(score) / denom;
}

double correlation(CorrelationMethod method, std::span<const double> a, std::span<const double> b) {
  return method == CorrelationMethod::Pearson ? pearson(a, b) : kendall_tau(a, b);
}

}  // namespace longeval::stats
