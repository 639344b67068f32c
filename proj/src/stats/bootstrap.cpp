#include "longeval/stats/bootstrap.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>

#include "longeval/stats/descriptive.hpp"

namespace longeval::stats {

void to_json(nlohmann::json& j, const BootstrapCI& ci) {
  j = {{"statistic", ci.statistic_name}, {"lower", ci.lower}, {"upper", ci.upper}, {"alpha", ci.alpha},
       {"k", ci.iterations},          {"seed", ci.seed}};
}

void resample_annotators(const Matrix& x, RandomStream& rng, Matrix& out) {
  const std::size_t m = x.cols();
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < m; ++j) out(i, j) = x(i, static_cast<std::size_t>(rng.below(m)));
  }
}

std::vector<double> bootstrap_samples(const Matrix& x, const Statistic& statistic, const BootstrapOptions& options) {
  if (x.rows() == 0 || x.cols() == 0) throw ValidationError("bootstrap of an empty matrix");
  const std::size_t k = options.iterations;
  std::vector<double> samples(k);

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, k / 64)));

  std::mutex error_mutex;
  std::size_t failed_iteration = k;
  std::string failure;

  auto worker = [&](std::size_t begin, std::size_t end) {
    Matrix resampled(x.rows(), x.cols());
    for (std::size_t t = begin; t < end; ++t) {
      RandomStream rng = derive_stream(options.seed, t);
      resample_annotators(x, rng, resampled);
      try {
        samples[t] = statistic(resampled);
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (t < failed_iteration) {
          failed_iteration = t;
          failure = e.what();
        }
        return;
      }
    }
  };

  if (threads <= 1) {
    worker(0, k);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (k + threads - 1) / threads;
    for (std::size_t begin = 0; begin < k; begin += chunk) {
      pool.emplace_back(worker, begin, std::min(k, begin + chunk));
    }
  }
  if (failed_iteration < k) throw BootstrapError(failed_iteration, failure);
  return samples;
}

BootstrapCI bootstrap_ci(const Matrix& x, const Statistic& statistic, const std::string& statistic_name,
                         const BootstrapOptions& options) {
  if (options.iterations < 100) throw ValidationError("bootstrap needs at least 100 iterations");
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
  std::vector<double> samples = bootstrap_samples(x, statistic, options);
  std::sort(samples.begin(), samples.end());
  BootstrapCI ci;
  ci.lower = percentile_sorted(samples, options.alpha / 2.0 * 100.0);
  ci.upper = percentile_sorted(samples, (1.0 - options.alpha / 2.0) * 100.0);
  ci.alpha = options.alpha;
  ci.iterations = options.iterations;
  ci.statistic_name = statistic_name;
  ci.seed = options.seed;
  return ci;
}

BootstrapCI mean_system_ci(const Matrix& x, const BootstrapOptions& options) {
  return bootstrap_ci(x, [](const Matrix& m) { return grand_mean(m); }, "mean", options);
}

BootstrapCI metric_correlation_ci(const Matrix& x, const std::vector<double>& metric, CorrelationMethod method,
                                  const BootstrapOptions& options) {
  if (metric.size() != x.rows()) throw ValidationError("metric vector does not cover every matrix row");
  if (std::all_of(metric.begin(), metric.end(), [&](double v) { return v == metric.front(); })) {
    throw UndefinedStatistic("correlation undefined: metric has zero variance");
  }
  return bootstrap_ci(
      x, [&](const Matrix& m) { return correlation(method, row_means(m), metric); },
      std::string(to_string(method)), options);
}

BootstrapCI metric_correlation_ci(const AnnotationMatrix& x, const MetricScoreTable& metric,
                                  CorrelationMethod method, const BootstrapOptions& options) {
  std::vector<double> aligned;
  std::vector<std::string> missing;
  for (const auto& id : x.summary_ids) {
    const auto it = metric.scores.find(id);
    if (it == metric.scores.end()) {
      missing.push_back(id);
    } else {
      aligned.push_back(it->second);
    }
  }
  if (!missing.empty()) throw MissingDataError("metric " + metric.metric_name + " does not cover matrix rows", missing);
  auto ci = metric_correlation_ci(x.values, aligned, method, options);
  ci.statistic_name = std::string(to_string(method)) + ":" + metric.metric_name;
  return ci;
}

}  // namespace longeval::stats
