#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "longeval/judgments.hpp"

namespace longeval::stats {

/// Categorical labels: one row per item, one column per rater. Categories
/// are integers in [0, n_categories).
using LabelTable = std::vector<std::vector<int>>;

/// Fleiss' kappa with category proportions pooled over all ratings.
/// nullopt when chance agreement is 1 (every rating in one category).
/// Throws ValidationError on ragged tables or labels outside the categories.
std::optional<double> fleiss_kappa(const LabelTable& labels, std::size_t n_categories = 2);

/// Free-marginal (Randolph) kappa: chance agreement fixed at 1/q.
double randolph_kappa(const LabelTable& labels, std::size_t n_categories = 2);

/// Fraction of items on which every rater gave the same label.
double all_agree_fraction(const LabelTable& labels);

struct AgreementReport {
  std::optional<double> fleiss_kappa;
  double randolph_kappa = 0.0;
  double all_agree_fraction = 0.0;
  std::size_t n_items = 0;
  std::size_t n_raters = 0;
};

AgreementReport agreement_report(const LabelTable& labels, std::size_t n_categories = 2);

void to_json(nlohmann::json& j, const AgreementReport& report);

/// Items are (summary, unit) pairs in key order; columns are slots. Throws
/// MissingDataError naming units that lack some of the slots 0..M-1.
struct UnitLabels {
  std::vector<std::string> item_keys;
  LabelTable labels;
};
UnitLabels unit_label_table(std::span<const FineJudgment> judgments);

}  // namespace longeval::stats
