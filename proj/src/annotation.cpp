#include "longeval/annotation.hpp"

#include <string>

#include "longeval/csv.hpp"
#include "longeval/error.hpp"

namespace longeval {

std::string_view to_string(Mode mode) { return mode == Mode::Fine ? "fine" : "coarse"; }

std::string_view to_string(HintMode mode) {
  switch (mode) {
    case HintMode::None: return "none";
    case HintMode::Algorithmic: return "algorithmic";
    case HintMode::Gold: return "gold";
  }
  return "none";
}

Mode parse_mode(std::string_view text) {
  if (text == "fine" || text == "FINE") return Mode::Fine;
  if (text == "coarse" || text == "COARSE") return Mode::Coarse;
  throw ValidationError("unknown mode \"" + std::string(text) + "\"");
}

HintMode parse_hint_mode(std::string_view text) {
  if (text == "none" || text == "NONE") return HintMode::None;
  if (text == "algorithmic" || text == "ALGORITHMIC") return HintMode::Algorithmic;
  if (text == "gold" || text == "GOLD") return HintMode::Gold;
  throw ValidationError("unknown hint mode \"" + std::string(text) + "\"");
}

ScaleSpec parse_scale(std::string_view text) {
  if (text == "likert" || text == "LIKERT_0_5") return ScaleSpec::likert_0_5();
  if (text == "da" || text == "DA_1_100") return ScaleSpec::direct_assessment();
  const auto dash = text.find('-', 1);
  if (dash != std::string_view::npos) {
    const auto lo = csv::parse_number(text.substr(0, dash));
    const auto hi = csv::parse_number(text.substr(dash + 1));
    if (lo && hi && *lo < *hi) return {*lo, *hi};
  }
  throw ValidationError("bad scale \"" + std::string(text) + "\"; expected likert, da or MIN-MAX");
}

void to_json(nlohmann::json& j, const ScaleSpec& scale) { j = {{"min", scale.min}, {"max", scale.max}}; }

void from_json(const nlohmann::json& j, ScaleSpec& scale) {
  j.at("min").get_to(scale.min);
  j.at("max").get_to(scale.max);
  if (!(scale.min < scale.max)) throw ValidationError("scale min must be below max");
}

}  // namespace longeval
