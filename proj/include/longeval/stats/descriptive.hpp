#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "longeval/matrix.hpp"

namespace longeval::stats {

enum class StddevDenominator { Sample, Population };

StddevDenominator parse_denominator(std::string_view text);

double mean(std::span<const double> values);
double stddev(std::span<const double> values, StddevDenominator denominator = StddevDenominator::Sample);

/// Empirical percentile, p in [0, 100], by linear interpolation between the
/// closest ranks: position p/100 * (n - 1) in the sorted sample.
double percentile(std::vector<double> values, double p);
double percentile_sorted(std::span<const double> sorted, double p);
double median(std::vector<double> values);

std::vector<double> row_means(const Matrix& x);
/// Mean over rows of row means.
double grand_mean(const Matrix& x);

/// Mean over rows of the per-row standard deviation across annotator slots.
/// Throws ValidationError when there are fewer than two slots.
double interannotator_stddev(const Matrix& x, StddevDenominator denominator = StddevDenominator::Sample);

}  // namespace longeval::stats
