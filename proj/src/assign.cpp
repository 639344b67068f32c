#include "longeval/assign.hpp"

#include <algorithm>
#include <cmath>

#include "longeval/csv.hpp"
#include "longeval/error.hpp"
#include "longeval/rng.hpp"

namespace longeval {

void Assignment::validate(std::size_t n_units) const {
  if (mode == Mode::Coarse) {
    if (!unit_indices.empty()) throw ValidationError("COARSE assignment for " + summary_id + " carries unit indices");
  } else {
    if (unit_indices.empty() || unit_indices.size() > n_units) {
      throw ValidationError("FINE assignment for " + summary_id + " has " + std::to_string(unit_indices.size()) +
                            " units of " + std::to_string(n_units));
    }
    for (std::size_t i = 0; i < unit_indices.size(); ++i) {
      if (unit_indices[i] >= n_units) throw ValidationError("unit index out of range in assignment for " + summary_id);
      if (i > 0 && unit_indices[i] <= unit_indices[i - 1]) {
        throw ValidationError("unit indices not sorted/unique in assignment for " + summary_id);
      }
    }
  }
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ValidationError("fraction outside (0, 1]");
}

void to_json(nlohmann::json& j, const Assignment& a) {
  j = {{"summary_id", a.summary_id},
       {"annotator_slot", a.annotator_slot},
       {"mode", to_string(a.mode)},
       {"hint_mode", to_string(a.hint_mode)},
       {"seed", a.seed},
       {"fraction", a.fraction}};
  if (a.mode == Mode::Fine) j["unit_indices"] = a.unit_indices;
  if (a.scale) j["scale"] = *a.scale;
}

void from_json(const nlohmann::json& j, Assignment& a) {
  j.at("summary_id").get_to(a.summary_id);
  j.at("annotator_slot").get_to(a.annotator_slot);
  a.mode = parse_mode(j.at("mode").get<std::string>());
  a.hint_mode = j.contains("hint_mode") ? parse_hint_mode(j.at("hint_mode").get<std::string>()) : HintMode::None;
  a.seed = j.value("seed", std::uint64_t{0});
  a.fraction = j.value("fraction", 1.0);
  a.unit_indices = j.value("unit_indices", std::vector<std::size_t>{});
  if (j.contains("scale")) {
    a.scale = j.at("scale").get<ScaleSpec>();
  } else {
    a.scale.reset();
  }
}

std::size_t subset_size(std::size_t n_units, double fraction) {
  // Halves round up even when f * n lands just below .5 in binary (0.7 * 45).
  const auto rounded = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n_units) + 1e-9));
  return std::min(n_units, std::max<std::size_t>(1, rounded));
}

std::vector<Assignment> make_fine_assignments(const std::string& summary_id, std::size_t n_units,
                                              std::size_t annotators, double fraction, std::uint64_t seed,
                                              HintMode hint_mode) {
  if (annotators == 0) throw ValidationError("annotator count must be at least 1");
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ValidationError("fraction outside (0, 1]");
  if (n_units == 0) throw ValidationError("summary " + summary_id + " has no units to assign");

  const std::size_t size = subset_size(n_units, fraction);
  std::vector<Assignment> out;
  out.reserve(annotators);
  for (std::size_t slot = 0; slot < annotators; ++slot) {
    Assignment a;
    a.summary_id = summary_id;
    a.annotator_slot = slot;
    a.mode = Mode::Fine;
    a.hint_mode = hint_mode;
    a.seed = seed;
    a.fraction = fraction;
    auto rng = derive_stream(seed, summary_id, slot);
    a.unit_indices = sample_without_replacement(rng, n_units, size);
    std::sort(a.unit_indices.begin(), a.unit_indices.end());
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<Assignment> make_coarse_assignments(const std::string& summary_id, std::size_t annotators,
                                                ScaleSpec scale, std::uint64_t seed) {
  if (annotators == 0) throw ValidationError("annotator count must be at least 1");
  std::vector<Assignment> out;
  for (std::size_t slot = 0; slot < annotators; ++slot) {
    Assignment a;
    a.summary_id = summary_id;
    a.annotator_slot = slot;
    a.mode = Mode::Coarse;
    a.seed = seed;
    a.scale = scale;
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace longeval
