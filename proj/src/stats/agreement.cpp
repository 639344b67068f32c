#include "longeval/stats/agreement.hpp"

#include <algorithm>
#include <map>

#include "longeval/error.hpp"

namespace longeval::stats {
namespace {

// Per-item category counts; validates shape and label range.
std::vector<std::vector<std::size_t>> category_counts(const LabelTable& labels, std::size_t n_categories) {
  if (labels.empty()) throw ValidationError("agreement over zero items");
  if (n_categories < 2) throw ValidationError("agreement needs at least 2 categories");
  const std::size_t raters = labels.front().size();
  if (raters < 2) throw ValidationError("agreement needs at least 2 raters per item");
  std::vector<std::vector<std::size_t>> counts(labels.size(), std::vector<std::size_t>(n_categories, 0));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].size() != raters) {
      throw ValidationError("ragged label table: item " + std::to_string(i) + " has " +
                            std::to_string(labels[i].size()) + " ratings, expected " + std::to_string(raters));
    }
    for (int label : labels[i]) {
      if (label < 0 || static_cast<std::size_t>(label) >= n_categories) {
        throw ValidationError("label " + std::to_string(label) + " outside the declared categories");
      }
      ++counts[i][static_cast<std::size_t>(label)];
    }
  }
  return counts;
}

// Mean observed pairwise agreement across items.
double observed_agreement(const std::vector<std::vector<std::size_t>>& counts, std::size_t raters) {
  const double n = static_cast<double>(raters);
  double total = 0.0;
  for (const auto& row : counts) {
    double sq = 0.0;
    for (std::size_t c : row) sq += static_cast<double>(c) * static_cast<double>(c);
    total += (sq - n) / (n * (n - 1.0));
  }
  return total / static_cast<double>(counts.size());
}

}  // namespace

std::optional<double> fleiss_kappa(const LabelTable& labels, std::size_t n_categories) {
  const auto counts = category_counts(labels, n_categories);
  const std::size_t raters = labels.front().size();
  const double p_bar = observed_agreement(counts, raters);

  const double total = static_cast<double>(labels.size() * raters);
  double p_e = 0.0;
  for (std::size_t c = 0; c < n_categories; ++c) {
    double column = 0.0;
    for (const auto& row : counts) column += static_cast<double>(row[c]);
    const double p = column / total;
    p_e += p * p;
  }
  if (p_e >= 1.0) return std::nullopt;
  return (p_bar - p_e) / (1.0 - p_e);
}

double randolph_kappa(const LabelTable& labels, std::size_t n_categories) {
  const auto counts = category_counts(labels, n_categories);
  const double p_bar = observed_agreement(counts, labels.front().size());
  const double p_e = 1.0 / static_cast<double>(n_categories);
  return (p_bar - p_e) / (1.0 - p_e);
}

double all_agree_fraction(const LabelTable& labels) {
  if (labels.empty()) throw ValidationError("agreement over zero items");
  std::size_t agree = 0;
  for (const auto& row : labels) {
    if (!row.empty() && std::all_of(row.begin(), row.end(), [&](int l) { return l == row.front(); })) ++agree;
  }
  return static_cast<double>(agree) / static_cast<double>(labels.size());
}

AgreementReport agreement_report(const LabelTable& labels, std::size_t n_categories) {
  AgreementReport report;
  report.fleiss_kappa = fleiss_kappa(labels, n_categories);
  report.randolph_kappa = randolph_kappa(labels, n_categories);
  report.all_agree_fraction = all_agree_fraction(labels);
  report.n_items = labels.size();
  report.n_raters = labels.front().size();
  return report;
}

void to_json(nlohmann::json& j, const AgreementReport& report) {
  j = {{"fleiss_kappa", report.fleiss_kappa ? nlohmann::json(*report.fleiss_kappa) : nlohmann::json("UNDEFINED")},
       {"randolph_kappa", report.randolph_kappa},
       {"all_agree_fraction", report.all_agree_fraction},
       {"n_items", report.n_items},
       {"n_raters", report.n_raters}};
}

UnitLabels unit_label_table(std::span<const FineJudgment> judgments) {
  std::map<std::pair<std::string, std::size_t>, std::map<std::size_t, int>> items;
  std::size_t m = 0;
  for (const auto& j : judgments) {
    items[{j.summary_id, j.unit_index}][j.annotator_slot] = j.label;
    m = std::max(m, j.annotator_slot + 1);
  }
  UnitLabels out;
  std::vector<std::string> ragged;
  for (const auto& [key, slots] : items) {
    std::string name = key.first + "/unit " + std::to_string(key.second);
    if (slots.size() != m) {
      ragged.push_back(std::move(name));
      continue;
    }
    std::vector<int> row;
    for (const auto& [_, label] : slots) row.push_back(label);
    out.item_keys.push_back(std::move(name));
    out.labels.push_back(std::move(row));
  }
  if (!ragged.empty()) {
    throw MissingDataError("units not judged by all " + std::to_string(m) + " slots", ragged);
  }
  return out;
}

}  // namespace longeval::stats
