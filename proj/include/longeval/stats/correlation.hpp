#pragma once

#include <span>
#include <string_view>

namespace longeval::stats {

enum class CorrelationMethod { Pearson, Kendall };

CorrelationMethod parse_correlation(std::string_view text);
std::string_view to_string(CorrelationMethod method);

/// Throws UndefinedStatistic when either vector has zero variance.
double pearson(std::span<const double> a, std::span<const double> b);

/// Kendall tau-b (tie-corrected). Throws UndefinedStatistic when either
/// vector is entirely tied.
double kendall_tau(std::span<const double> a, std::span<const double> b);

double correlation(CorrelationMethod method, std::span<const double> a, std::span<const double> b);

}  // namespace longeval::stats
