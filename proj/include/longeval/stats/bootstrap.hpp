#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "longeval/corpus.hpp"
#include "longeval/judgments.hpp"
#include "longeval/matrix.hpp"
#include "longeval/rng.hpp"
#include "longeval/stats/correlation.hpp"

namespace longeval::stats {

struct BootstrapCI {
  double lower = 0.0;
  double upper = 0.0;
  double alpha = 0.05;
  std::size_t iterations = 0;
  std::string statistic_name;
  std::uint64_t seed = 0;

  double midpoint() const { return 0.5 * (lower + upper); }
};

void to_json(nlohmann::json& j, const BootstrapCI& ci);

struct BootstrapOptions {
  std::size_t iterations = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  /// Worker threads; 0 picks hardware concurrency. Results do not depend on it.
  unsigned threads = 0;
};

using Statistic = std::function<double(const Matrix&)>;

/// The statistic failed on a resample.
class BootstrapError : public Error {
 public:
  BootstrapError(std::size_t iteration, const std::string& what)
      : Error("statistic failed on bootstrap iteration " + std::to_string(iteration) + ": " + what),
        iteration_(iteration) {}
  std::size_t iteration() const { return iteration_; }

 private:
  std::size_t iteration_;
};

/// One annotator resample: for every row independently, draw M column
/// indices with replacement and copy those cells into `out`.
void resample_annotators(const Matrix& x, RandomStream& rng, Matrix& out);

/// The statistic evaluated on `options.iterations` annotator resamples of
/// `x`. Iteration t draws from a stream keyed by (seed, t), so the result is
/// identical for any thread count.
std::vector<double> bootstrap_samples(const Matrix& x, const Statistic& statistic, const BootstrapOptions& options);

/// (alpha/2, 1 - alpha/2) percentiles of bootstrap_samples. Requires at
/// least 100 iterations and 0 < alpha < 1.
BootstrapCI bootstrap_ci(const Matrix& x, const Statistic& statistic, const std::string& statistic_name,
                         const BootstrapOptions& options);

/// CI of the mean over summaries of the mean over annotators.
BootstrapCI mean_system_ci(const Matrix& x, const BootstrapOptions& options);

/// CI of the correlation between per-summary annotator means and `metric`
/// (aligned with the rows of `x`). Throws UndefinedStatistic up front when
/// the metric has zero variance.
BootstrapCI metric_correlation_ci(const Matrix& x, const std::vector<double>& metric, CorrelationMethod method,
                                  const BootstrapOptions& options);

/// Aligns `metric` to the matrix rows by summary_id.
BootstrapCI metric_correlation_ci(const AnnotationMatrix& x, const MetricScoreTable& metric,
                                  CorrelationMethod method, const BootstrapOptions& options);

}  // namespace longeval::stats
