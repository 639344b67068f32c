#include "longeval/stats/partial.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "longeval/assign.hpp"
#include "longeval/error.hpp"
#include "longeval/rng.hpp"
#include "longeval/stats/correlation.hpp"

namespace longeval::stats {

std::vector<FullyAnnotatedSummary> full_annotations(std::span<const FineJudgment> judgments) {
  std::map<std::string, std::map<std::size_t, std::map<std::size_t, int>>> grouped;  // summary -> slot -> unit
  for (const auto& j : judgments) grouped[j.summary_id][j.annotator_slot][j.unit_index] = j.label;

  std::size_t m = 0;
  for (const auto& [_, slots] : grouped) m = std::max(m, slots.size());

  std::vector<FullyAnnotatedSummary> out;
  std::vector<std::string> incomplete;
  for (const auto& [summary, slots] : grouped) {
    std::size_t n = 0;
    for (const auto& [_, units] : slots) n = std::max(n, units.rbegin()->first + 1);
    bool complete = slots.size() == m && slots.rbegin()->first == m - 1;
    for (const auto& [_, units] : slots) complete = complete && units.size() == n;
    if (!complete) {
      incomplete.push_back(summary);
      continue;
    }
    FullyAnnotatedSummary s;
    s.summary_id = summary;
    for (const auto& [_, units] : slots) {
      std::vector<int> row;
      for (const auto& [__, label] : units) row.push_back(label);
      s.labels.push_back(std::move(row));
    }
    out.push_back(std::move(s));
  }
  if (!incomplete.empty()) throw MissingDataError("summaries without full FINE coverage", incomplete);
  return out;
}

void to_json(nlohmann::json& j, const PartialCurvePoint& p) {
  j = {{"fraction", p.fraction},       {"n_subsets", p.n_subsets},       {"undefined_tau", p.undefined_tau},
       {"tau_p2_5", p.tau_p2_5},       {"tau_p50", p.tau_p50},           {"tau_p97_5", p.tau_p97_5},
       {"stddev_p2_5", p.stddev_p2_5}, {"stddev_p50", p.stddev_p50},     {"stddev_p97_5", p.stddev_p97_5},
       {"stddev_mean", p.stddev_mean}};
}

std::vector<PartialCurvePoint> partial_annotation_curve(std::span<const FullyAnnotatedSummary> summaries,
                                                        const PartialCurveOptions& options) {
  if (summaries.size() < 2) throw ValidationError("partial-annotation curve needs at least 2 summaries");
  if (options.n_subsets < 100) throw ValidationError("partial-annotation curve needs at least 100 subsets");
  const std::size_t m = summaries.front().labels.size();
  for (const auto& s : summaries) {
    if (s.labels.size() != m || s.units() == 0) {
      throw ValidationError("summary " + s.summary_id + " lacks full coverage by " + std::to_string(m) + " slots");
    }
  }
  for (double f : options.fractions) {
    if (!(f > 0.0 && f <= 1.0)) throw ValidationError("fraction " + std::to_string(f) + " outside (0, 1]");
  }

  std::vector<double> full(summaries.size());
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    double total = 0.0;
    for (const auto& slot : summaries[i].labels) total += summary_score_fine(slot);
    full[i] = total / static_cast<double>(m);
  }

  std::vector<PartialCurvePoint> curve;
  for (std::size_t fi = 0; fi < options.fractions.size(); ++fi) {
    const double f = options.fractions[fi];
    PartialCurvePoint point;
    point.fraction = f;
    point.n_subsets = options.n_subsets;
    std::vector<double> partial(summaries.size());
    Matrix x(summaries.size(), m);
    std::vector<int> chosen;
    for (std::size_t draw = 0; draw < options.n_subsets; ++draw) {
      const std::uint64_t draw_seed = combine(combine(options.seed, fi), draw);
      for (std::size_t i = 0; i < summaries.size(); ++i) {
        const auto& s = summaries[i];
        const auto assignments = make_fine_assignments(s.summary_id, s.units(), m, f, draw_seed);
        for (const auto& a : assignments) {
          chosen.clear();
          for (std::size_t u : a.unit_indices) chosen.push_back(s.labels[a.annotator_slot][u]);
          x(i, a.annotator_slot) = summary_score_fine(chosen);
        }
        partial[i] = mean(x.row(i));
      }
      try {
        point.taus.push_back(kendall_tau(full, partial));
      } catch (const UndefinedStatistic&) {
        ++point.undefined_tau;
      }
      if (m >= 2) point.stddevs.push_back(interannotator_stddev(x, options.denominator));
    }
    if (!point.taus.empty()) {
      std::vector<double> sorted = point.taus;
      std::sort(sorted.begin(), sorted.end());
      point.tau_p2_5 = percentile_sorted(sorted, 2.5);
      point.tau_p50 = percentile_sorted(sorted, 50.0);
      point.tau_p97_5 = percentile_sorted(sorted, 97.5);
    } else {
      point.tau_p2_5 = point.tau_p50 = point.tau_p97_5 = std::nan("");
    }
    if (!point.stddevs.empty()) {
      std::vector<double> sorted = point.stddevs;
      std::sort(sorted.begin(), sorted.end());
      point.stddev_p2_5 = percentile_sorted(sorted, 2.5);
      point.stddev_p50 = percentile_sorted(sorted, 50.0);
      point.stddev_p97_5 = percentile_sorted(sorted, 97.5);
      point.stddev_mean = mean(sorted);
    }
    curve.push_back(std::move(point));
  }
  return curve;
}

}  // namespace longeval::stats
