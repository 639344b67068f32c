#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "longeval/annotation.hpp"
#include "longeval/matrix.hpp"

namespace longeval {

class Corpus;

/// Binary support judgment of one unit by one annotator slot.
struct FineJudgment {
  std::string summary_id;
  std::size_t unit_index = 0;
  std::size_t annotator_slot = 0;
  int label = 0;  // 1 = supported by the source, 0 = not supported
  std::int64_t elapsed_ms = 0;
  HintMode hint_mode = HintMode::None;
  std::string submitted_at;  // ISO-8601 UTC
};

/// Whole-summary rating by one annotator slot.
struct CoarseJudgment {
  std::string summary_id;
  std::size_t annotator_slot = 0;
  double rating = 0.0;
  ScaleSpec scale;
  std::optional<std::string> comment;
  std::int64_t elapsed_ms = 0;
  std::string submitted_at;
};

using Judgment = std::variant<FineJudgment, CoarseJudgment>;

/// Uniqueness key: (summary, unit, slot) for FINE, (summary, slot) for COARSE.
struct JudgmentKey {
  Mode mode = Mode::Fine;
  std::string summary_id;
  std::size_t unit_index = 0;
  std::size_t annotator_slot = 0;

  auto operator<=>(const JudgmentKey&) const = default;
  std::string to_string() const;
};

JudgmentKey key_of(const Judgment& judgment);

/// Throws ValidationError for labels outside {0,1}, ratings outside the
/// scale, or negative elapsed time.
void validate(const Judgment& judgment);

/// Entry of the append-only judgment log. A correction is a new record
/// whose `supersedes` names the seq of the record it replaces.
struct JudgmentRecord {
  std::uint64_t seq = 0;
  std::optional<std::uint64_t> supersedes;
  Judgment judgment;

  JudgmentKey key() const { return key_of(judgment); }
};

void to_json(nlohmann::json& j, const FineJudgment& f);
void to_json(nlohmann::json& j, const CoarseJudgment& c);
void to_json(nlohmann::json& j, const JudgmentRecord& r);
void from_json(const nlohmann::json& j, JudgmentRecord& r);
/// Parses the judgment part of a record (`type` selects FINE or COARSE).
Judgment judgment_from_json(const nlohmann::json& j);

/// Reads a judgment log, e.g. a service export. Records without `seq` are
/// numbered by line.
std::vector<JudgmentRecord> read_judgments(std::istream& in, const std::string& source);
std::vector<JudgmentRecord> read_judgments_file(const std::string& path);

/// Latest record per key after applying corrections; ordered by key.
std::vector<Judgment> effective_judgments(std::span<const JudgmentRecord> log);

std::vector<FineJudgment> fine_only(std::span<const Judgment> judgments);
std::vector<CoarseJudgment> coarse_only(std::span<const Judgment> judgments);

/// 100 x mean label. Throws ValidationError on an empty set.
double summary_score_fine(std::span<const int> labels);
double summary_score_fine(std::span<const FineJudgment> judgments);

/// 100 x (rating - min) / (max - min).
double summary_score_coarse(const CoarseJudgment& judgment);
double summary_score_coarse(double rating, ScaleSpec scale);

/// N summaries x M slots of summary scores on the 0-100 scale.
struct AnnotationMatrix {
  std::vector<std::string> summary_ids;
  Matrix values;
  Mode provenance = Mode::Fine;
  double fraction = 1.0;

  std::size_t annotators() const { return values.cols(); }
};

struct MatrixOptions {
  /// Summary filter; all summaries with judgments are kept when empty.
  std::function<bool(const std::string& summary_id)> include;
  /// Expected slot count; inferred as the largest slot count seen when unset.
  std::optional<std::size_t> annotators;
};

/// Rows ordered by summary_id. Throws MissingDataError naming every summary
/// whose slots are not exactly {0..M-1}, and Error("empty matrix") when
/// nothing is selected.
AnnotationMatrix build_matrix(std::span<const Judgment> judgments, Mode mode, const MatrixOptions& options = {});

/// Restricts to summaries of `system_id` in `corpus` (all systems when empty).
AnnotationMatrix build_matrix(const Corpus& corpus, std::span<const Judgment> judgments, Mode mode,
                              const std::string& system_id = {});

/// Per system: mean over its rows of the mean over slots.
/// `system_of` maps summary_id to system_id and must cover every row.
std::map<std::string, double> system_score(const AnnotationMatrix& matrix,
                                           const std::map<std::string, std::string>& system_of);
std::map<std::string, std::string> system_lookup(const Corpus& corpus);

/// CSV `summary_id,slot_0,...,slot_{M-1}`.
void write_matrix_csv(std::ostream& out, const AnnotationMatrix& matrix);
AnnotationMatrix read_matrix_csv(std::istream& in, const std::string& source);
AnnotationMatrix read_matrix_csv_file(const std::string& path);

/// Current UTC time as ISO-8601 with milliseconds.
std::string utc_timestamp();

}  // namespace longeval
