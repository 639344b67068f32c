#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "longeval/judgments.hpp"

namespace longeval::stats {

struct TimingOptions {
  /// Per-unit times above this are treated as breaks and left out of medians.
  std::int64_t cap_ms = 10 * 60 * 1000;
  /// Units per (summary, slot) that count as the start of a summary.
  std::size_t first_units = 5;
};

/// (summary_id, unit_index) -> true when the unit was deliberately perturbed.
using GoldLabels = std::map<std::pair<std::string, std::size_t>, bool>;

/// JSONL `{summary_id, unit_index, perturbed}`.
GoldLabels read_gold_labels(std::istream& in, const std::string& source);
GoldLabels read_gold_labels_file(const std::string& path);

struct PerturbationReport {
  double accuracy = 0.0;
  std::optional<double> fleiss_kappa;
  std::size_t kappa_items = 0;
  double median_time_all_ms = 0.0;
  double median_time_first_ms = 0.0;
  std::size_t n_judgments = 0;
  std::size_t timing_excluded = 0;  // judgments above the cap
  std::int64_t cap_ms = 0;
};

void to_json(nlohmann::json& j, const PerturbationReport& report);

/// Accuracy counts a judgment correct when "supported" coincides with an
/// unperturbed gold unit. Kappa is computed over units judged by the most
/// common number of slots. Throws MissingDataError when a judged unit has no
/// gold label.
PerturbationReport perturbation_report(std::span<const FineJudgment> judgments, const GoldLabels& gold,
                                       const TimingOptions& options = {});

struct LearningCurveRow {
  HintMode hint_mode = HintMode::None;
  std::size_t bucket = 0;  // decile of progress through the summary, 0..9
  double mean_elapsed_ms = 0.0;
  std::size_t count = 0;
};

/// Mean per-unit time by progress decile and hint mode. Progress is the
/// position of a unit among the units the same slot judged on the same
/// summary, in unit order.
std::vector<LearningCurveRow> learning_curve(std::span<const FineJudgment> judgments,
                                             const TimingOptions& options = {});

}  // namespace longeval::stats
