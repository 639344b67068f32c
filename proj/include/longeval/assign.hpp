#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "longeval/annotation.hpp"
#include "longeval/segment.hpp"

namespace longeval {

/// The work one annotator slot does on one summary.
struct Assignment {
  std::string summary_id;
  std::size_t annotator_slot = 0;
  Mode mode = Mode::Fine;
  std::vector<std::size_t> unit_indices;  // FINE only; sorted, unique
  HintMode hint_mode = HintMode::None;
  std::uint64_t seed = 0;
  double fraction = 1.0;
  std::optional<ScaleSpec> scale;  // COARSE only

  /// Throws ValidationError when the invariants above do not hold.
  void validate(std::size_t n_units) const;
};

void to_json(nlohmann::json& j, const Assignment& a);
void from_json(const nlohmann::json& j, Assignment& a);

/// max(1, round(f * n)), capped at n. Halves round away from zero.
std::size_t subset_size(std::size_t n_units, double fraction);

/// One FINE assignment per slot. Slot j's subset is drawn without replacement
/// from a stream keyed by (seed, summary_id, j), so each slot is reproducible
/// on its own and independent of the others.
std::vector<Assignment> make_fine_assignments(const std::string& summary_id, std::size_t n_units,
                                              std::size_t annotators, double fraction, std::uint64_t seed,
                                              HintMode hint_mode = HintMode::None);

inline std::vector<Assignment> make_fine_assignments(const std::string& summary_id,
                                                     const std::vector<FineUnit>& units, std::size_t annotators,
                                                     double fraction, std::uint64_t seed,
                                                     HintMode hint_mode = HintMode::None) {
  return make_fine_assignments(summary_id, units.size(), annotators, fraction, seed, hint_mode);
}

std::vector<Assignment> make_coarse_assignments(const std::string& summary_id, std::size_t annotators,
                                                ScaleSpec scale, std::uint64_t seed);

}  // namespace longeval
