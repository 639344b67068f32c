#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

namespace longeval {

/// FINE: binary judgments per unit. COARSE: one rating per summary.
enum class Mode { Fine, Coarse };

/// Which source highlights an annotator sees for a summary.
enum class HintMode { None, Algorithmic, Gold };

std::string_view to_string(Mode mode);
std::string_view to_string(HintMode mode);
Mode parse_mode(std::string_view text);
HintMode parse_hint_mode(std::string_view text);

/// Closed rating interval of a COARSE protocol.
struct ScaleSpec {
  double min = 0.0;
  double max = 5.0;

  static constexpr ScaleSpec likert_0_5() { return {0.0, 5.0}; }
  static constexpr ScaleSpec direct_assessment() { return {1.0, 100.0}; }

  bool contains(double rating) const { return rating >= min && rating <= max; }
  friend bool operator==(const ScaleSpec&, const ScaleSpec&) = default;
};

/// Accepts "likert", "da", or "<min>-<max>".
ScaleSpec parse_scale(std::string_view text);

void to_json(nlohmann::json& j, const ScaleSpec& scale);
void from_json(const nlohmann::json& j, ScaleSpec& scale);

}  // namespace longeval
