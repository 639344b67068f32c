#include "longeval/stats/timing.hpp"

#include <algorithm>
#include <fstream>

#include "longeval/error.hpp"
#include "longeval/jsonl.hpp"
#include "longeval/stats/agreement.hpp"
#include "longeval/stats/descriptive.hpp"

namespace longeval::stats {
namespace {

using SlotKey = std::pair<std::string, std::size_t>;  // (summary_id, slot)

// Judgments of each (summary, slot), sorted by unit index.
std::map<SlotKey, std::vector<const FineJudgment*>> by_summary_slot(std::span<const FineJudgment> judgments) {
  std::map<SlotKey, std::vector<const FineJudgment*>> groups;
  for (const auto& j : judgments) groups[{j.summary_id, j.annotator_slot}].push_back(&j);
  for (auto& [_, list] : groups) {
    std::sort(list.begin(), list.end(), [](const auto* a, const auto* b) { return a->unit_index < b->unit_index; });
  }
  return groups;
}

}  // namespace

GoldLabels read_gold_labels(std::istream& in, const std::string& source) {
  GoldLabels gold;
  for_each_jsonl(in, source, [&](const nlohmann::json& j, std::size_t line) {
    auto key = std::make_pair(j.at("summary_id").get<std::string>(), j.at("unit_index").get<std::size_t>());
    if (!j.at("perturbed").is_boolean()) throw ParseError(source, line, "\"perturbed\" must be true or false");
    if (!gold.emplace(key, j.at("perturbed").get<bool>()).second) {
      throw ParseError(source, line, "duplicate gold label");
    }
  });
  return gold;
}

GoldLabels read_gold_labels_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_gold_labels(in, path);
}

void to_json(nlohmann::json& j, const PerturbationReport& r) {
  j = {{"accuracy_2way", r.accuracy},
       {"fleiss_kappa", r.fleiss_kappa ? nlohmann::json(*r.fleiss_kappa) : nlohmann::json("UNDEFINED")},
       {"kappa_items", r.kappa_items},
       {"median_time_all_ms", r.median_time_all_ms},
       {"median_time_first_ms", r.median_time_first_ms},
       {"n_judgments", r.n_judgments},
       {"timing_excluded", r.timing_excluded},
       {"timing_cap_ms", r.cap_ms}};
}

PerturbationReport perturbation_report(std::span<const FineJudgment> judgments, const GoldLabels& gold,
                                       const TimingOptions& options) {
  if (judgments.empty()) throw ValidationError("perturbation report over zero judgments");
  PerturbationReport report;
  report.n_judgments = judgments.size();
  report.cap_ms = options.cap_ms;

  std::vector<std::string> missing;
  std::size_t correct = 0;
  for (const auto& j : judgments) {
    const auto it = gold.find({j.summary_id, j.unit_index});
    if (it == gold.end()) {
      missing.push_back(j.summary_id + "/unit " + std::to_string(j.unit_index));
      continue;
    }
    const bool said_supported = j.label == 1;
    if (said_supported == !it->second) ++correct;
  }
  if (!missing.empty()) throw MissingDataError("judged units without gold labels", missing);
  report.accuracy = static_cast<double>(correct) / static_cast<double>(judgments.size());

  // Kappa over units sharing the modal rater count.
  std::map<std::pair<std::string, std::size_t>, std::vector<int>> per_unit;
  for (const auto& j : judgments) per_unit[{j.summary_id, j.unit_index}].push_back(j.label);
  std::map<std::size_t, std::size_t> rater_counts;
  for (const auto& [_, labels] : per_unit) ++rater_counts[labels.size()];
  const auto modal = std::max_element(rater_counts.begin(), rater_counts.end(), [](const auto& a, const auto& b) {
    return a.second < b.second || (a.second == b.second && a.first < b.first);
  });
  if (modal->first >= 2) {
    LabelTable table;
    for (const auto& [_, labels] : per_unit) {
      if (labels.size() == modal->first) table.push_back(labels);
    }
    report.kappa_items = table.size();
    report.fleiss_kappa = fleiss_kappa(table, 2);
  }

  std::vector<double> all_times;
  std::vector<double> first_times;
  for (const auto& [_, list] : by_summary_slot(judgments)) {
    for (std::size_t pos = 0; pos < list.size(); ++pos) {
      const auto ms = list[pos]->elapsed_ms;
      if (ms > options.cap_ms) {
        ++report.timing_excluded;
        continue;
      }
      all_times.push_back(static_cast<double>(ms));
      if (pos < options.first_units) first_times.push_back(static_cast<double>(ms));
    }
  }
  if (!all_times.empty()) report.median_time_all_ms = median(all_times);
  if (!first_times.empty()) report.median_time_first_ms = median(first_times);
  return report;
}

std::vector<LearningCurveRow> learning_curve(std::span<const FineJudgment> judgments, const TimingOptions& options) {
  std::map<std::pair<HintMode, std::size_t>, std::pair<double, std::size_t>> sums;
  for (const auto& [_, list] : by_summary_slot(judgments)) {
    const std::size_t n = list.size();
    for (std::size_t pos = 0; pos < n; ++pos) {
      const FineJudgment& j = *list[pos];
      if (j.elapsed_ms > options.cap_ms) continue;
      const std::size_t bucket = std::min<std::size_t>(9, pos * 10 / n);
      auto& [sum, count] = sums[{j.hint_mode, bucket}];
      sum += static_cast<double>(j.elapsed_ms);
      ++count;
    }
  }
  std::vector<LearningCurveRow> rows;
  for (const auto& [key, acc] : sums) {
    rows.push_back({key.first, key.second, acc.first / static_cast<double>(acc.second), acc.second});
  }
  return rows;
}

}  // namespace longeval::stats
