#include "longeval/stats/descriptive.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "longeval/error.hpp"

namespace longeval::stats {

StddevDenominator parse_denominator(std::string_view text) {
  if (text == "sample") return StddevDenominator::Sample;
  if (text == "population") return StddevDenominator::Population;
  throw ValidationError("stddev denominator must be sample or population, got \"" + std::string(text) + "\"");
}

double mean(std::span<const double> values) {
  if (values.empty()) throw ValidationError("mean of an empty sample");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double stddev(std::span<const double> values, StddevDenominator denominator) {
  const std::size_t n = values.size();
  const std::size_t dof = denominator == StddevDenominator::Sample ? n - 1 : n;
  if (n == 0 || dof == 0) throw ValidationError("standard deviation needs at least 2 values");
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(dof));
}

double percentile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ValidationError("percentile of an empty sample");
  if (!(p >= 0.0 && p <= 100.0)) throw ValidationError("percentile outside [0, 100]");
  const double pos = p / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double percentile(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  return percentile_sorted(values, p);
}

double median(std::vector<double> values) { return percentile(std::move(values), 50.0); }

std::vector<double> row_means(const Matrix& x) {
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = mean(x.row(i));
  return out;
}

double grand_mean(const Matrix& x) { return mean(row_means(x)); }

double interannotator_stddev(const Matrix& x, StddevDenominator denominator) {
  if (x.cols() < 2) throw ValidationError("inter-annotator standard deviation needs at least 2 annotator slots");
  if (x.rows() == 0) throw ValidationError("inter-annotator standard deviation of an empty matrix");
  double total = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) total += stddev(x.row(i), denominator);
  return total / static_cast<double>(x.rows());
}

}  // namespace longeval::stats
