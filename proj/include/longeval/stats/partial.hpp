#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "longeval/judgments.hpp"
#include "longeval/stats/descriptive.hpp"

namespace longeval::stats {

/// Complete FINE annotation of one summary: labels[slot][unit].
struct FullyAnnotatedSummary {
  std::string summary_id;
  std::vector<std::vector<int>> labels;

  std::size_t units() const { return labels.empty() ? 0 : labels.front().size(); }
};

/// Groups f = 1.0 judgments per summary. Throws MissingDataError naming
/// summaries where some slot skipped a unit or some slot is absent.
std::vector<FullyAnnotatedSummary> full_annotations(std::span<const FineJudgment> judgments);

struct PartialCurveOptions {
  std::vector<double> fractions{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::size_t n_subsets = 1000;
  std::uint64_t seed = 0;
  StddevDenominator denominator = StddevDenominator::Sample;
};

struct PartialCurvePoint {
  double fraction = 1.0;
  std::size_t n_subsets = 0;
  std::size_t undefined_tau = 0;  // draws whose partial scores were all tied
  double tau_p2_5 = 0.0;
  double tau_p50 = 0.0;
  double tau_p97_5 = 0.0;
  double stddev_p2_5 = 0.0;
  double stddev_p50 = 0.0;
  double stddev_p97_5 = 0.0;
  double stddev_mean = 0.0;
  std::vector<double> taus;     // one per defined draw
  std::vector<double> stddevs;  // one per draw
};

void to_json(nlohmann::json& j, const PartialCurvePoint& point);

/// For each fraction and each of n_subsets draws: every slot of every summary
/// judges only its make_fine_assignments subset (seed derived from
/// (options.seed, fraction index, draw)); the resulting summary scores are
/// compared with the full-annotation scores by Kendall tau-b, and the partial
/// matrix's inter-annotator standard deviation is recorded.
std::vector<PartialCurvePoint> partial_annotation_curve(std::span<const FullyAnnotatedSummary> summaries,
                                                        const PartialCurveOptions& options);

}  // namespace longeval::stats
