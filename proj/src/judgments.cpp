#include "longeval/judgments.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <numeric>
#include <ostream>
#include <set>

#include "longeval/corpus.hpp"
#include "longeval/csv.hpp"
#include "longeval/error.hpp"
#include "longeval/jsonl.hpp"

namespace longeval {

std::string JudgmentKey::to_string() const {
  std::string s = summary_id;
  if (mode == Mode::Fine) s += "/unit " + std::to_string(unit_index);
  return s + "/slot " + std::to_string(annotator_slot);
}

JudgmentKey key_of(const Judgment& judgment) {
  return std::visit(
      [](const auto& j) -> JudgmentKey {
        using T = std::decay_t<decltype(j)>;
        if constexpr (std::is_same_v<T, FineJudgment>) {
          return {Mode::Fine, j.summary_id, j.unit_index, j.annotator_slot};
        } else {
          return {Mode::Coarse, j.summary_id, 0, j.annotator_slot};
        }
      },
      judgment);
}

void validate(const Judgment& judgment) {
  if (const auto* f = std::get_if<FineJudgment>(&judgment)) {
    if (f->summary_id.empty()) throw ValidationError("judgment without summary_id");
    if (f->label != 0 && f->label != 1) throw ValidationError("label must be 0 or 1, got " + std::to_string(f->label));
    if (f->elapsed_ms < 0) throw ValidationError("elapsed_ms must be nonnegative");
  } else {
    const auto& c = std::get<CoarseJudgment>(judgment);
    if (c.summary_id.empty()) throw ValidationError("judgment without summary_id");
    if (!c.scale.contains(c.rating)) {
      throw ValidationError("rating " + csv::format_number(c.rating) + " outside scale [" +
                            csv::format_number(c.scale.min) + ", " + csv::format_number(c.scale.max) + "]");
    }
    if (c.elapsed_ms < 0) throw ValidationError("elapsed_ms must be nonnegative");
  }
}

void to_json(nlohmann::json& j, const FineJudgment& f) {
  j = {{"type", "fine"},
       {"summary_id", f.summary_id},
       {"unit_index", f.unit_index},
       {"annotator_slot", f.annotator_slot},
       {"label", f.label},
       {"elapsed_ms", f.elapsed_ms},
       {"hint_mode", to_string(f.hint_mode)},
       {"submitted_at", f.submitted_at}};
}

void to_json(nlohmann::json& j, const CoarseJudgment& c) {
  j = {{"type", "coarse"},
       {"summary_id", c.summary_id},
       {"annotator_slot", c.annotator_slot},
       {"rating", c.rating},
       {"scale", c.scale},
       {"elapsed_ms", c.elapsed_ms},
       {"submitted_at", c.submitted_at}};
  if (c.comment) j["comment"] = *c.comment;
}

void to_json(nlohmann::json& j, const JudgmentRecord& r) {
  std::visit([&](const auto& v) { to_json(j, v); }, r.judgment);
  j["seq"] = r.seq;
  if (r.supersedes) j["supersedes"] = *r.supersedes;
}

Judgment judgment_from_json(const nlohmann::json& j) {
  const std::string type = j.value("type", std::string(j.contains("label") ? "fine" : "coarse"));
  if (type == "fine") {
    FineJudgment f;
    j.at("summary_id").get_to(f.summary_id);
    j.at("unit_index").get_to(f.unit_index);
    j.at("annotator_slot").get_to(f.annotator_slot);
    if (!j.at("label").is_number_integer()) throw ValidationError("label must be an integer 0 or 1");
    j.at("label").get_to(f.label);
    f.elapsed_ms = j.value("elapsed_ms", std::int64_t{0});
    f.hint_mode = parse_hint_mode(j.value("hint_mode", std::string("none")));
    f.submitted_at = j.value("submitted_at", std::string{});
    return f;
  }
  if (type == "coarse") {
    CoarseJudgment c;
    j.at("summary_id").get_to(c.summary_id);
    j.at("annotator_slot").get_to(c.annotator_slot);
    if (!j.at("rating").is_number()) throw ValidationError("rating must be numeric");
    j.at("rating").get_to(c.rating);
    c.scale = j.contains("scale") ? j.at("scale").get<ScaleSpec>() : ScaleSpec::likert_0_5();
    if (j.contains("comment") && !j.at("comment").is_null()) c.comment = j.at("comment").get<std::string>();
    c.elapsed_ms = j.value("elapsed_ms", std::int64_t{0});
    c.submitted_at = j.value("submitted_at", std::string{});
    return c;
  }
  throw ValidationError("unknown judgment type \"" + type + "\"");
}

void from_json(const nlohmann::json& j, JudgmentRecord& r) {
  r.judgment = judgment_from_json(j);
  r.seq = j.value("seq", std::uint64_t{0});
  if (j.contains("supersedes") && !j.at("supersedes").is_null()) {
    r.supersedes = j.at("supersedes").get<std::uint64_t>();
  } else {
    r.supersedes.reset();
  }
}

std::vector<JudgmentRecord> read_judgments(std::istream& in, const std::string& source) {
  std::vector<JudgmentRecord> records;
  for_each_jsonl(in, source, [&](const nlohmann::json& j, std::size_t line) {
    JudgmentRecord r = j.get<JudgmentRecord>();
    if (!j.contains("seq")) r.seq = line;
    validate(r.judgment);
    records.push_back(std::move(r));
  });
  return records;
}

std::vector<JudgmentRecord> read_judgments_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_judgments(in, path);
}

std::vector<Judgment> effective_judgments(std::span<const JudgmentRecord> log) {
  std::map<JudgmentKey, const JudgmentRecord*> latest;
  for (const JudgmentRecord& r : log) {
    const JudgmentKey key = r.key();
    auto [it, inserted] = latest.emplace(key, &r);
    if (inserted) continue;
    if (!r.supersedes || *r.supersedes != it->second->seq) {
      throw DuplicateError("duplicate judgment for " + key.to_string() + " (seq " + std::to_string(r.seq) + ")");
    }
    it->second = &r;
  }
  std::vector<Judgment> out;
  out.reserve(latest.size());
  for (const auto& [_, r] : latest) out.push_back(r->judgment);
  return out;
}

std::vector<FineJudgment> fine_only(std::span<const Judgment> judgments) {
  std::vector<FineJudgment> out;
  for (const auto& j : judgments) {
    if (const auto* f = std::get_if<FineJudgment>(&j)) out.push_back(*f);
  }
  return out;
}

std::vector<CoarseJudgment> coarse_only(std::span<const Judgment> judgments) {
  std::vector<CoarseJudgment> out;
  for (const auto& j : judgments) {
    if (const auto* c = std::get_if<CoarseJudgment>(&j)) out.push_back(*c);
  }
  return out;
}

double summary_score_fine(std::span<const int> labels) {
  if (labels.empty()) throw ValidationError("no judgments to score");
  std::size_t supported = 0;
  for (int label : labels) {
    if (label != 0 && label != 1) throw ValidationError("label must be 0 or 1");
    supported += static_cast<std::size_t>(label);
  }
  return 100.0 * static_cast<double>(supported) / static_cast<double>(labels.size());
}

double summary_score_fine(std::span<const FineJudgment> judgments) {
  std::vector<int> labels;
  labels.reserve(judgments.size());
  for (const auto& j : judgments) labels.push_back(j.label);
  return summary_score_fine(labels);
}

double summary_score_coarse(double rating, ScaleSpec scale) {
  if (!scale.contains(rating)) {
    throw ValidationError("rating " + csv::format_number(rating) + " outside scale");
  }
  return 100.0 * (rating - scale.min) / (scale.max - scale.min);
}

double summary_score_coarse(const CoarseJudgment& judgment) {
  return summary_score_coarse(judgment.rating, judgment.scale);
}

AnnotationMatrix build_matrix(std::span<const Judgment> judgments, Mode mode, const MatrixOptions& options) {
  // summary -> slot -> score
  std::map<std::string, std::map<std::size_t, double>> scores;
  if (mode == Mode::Fine) {
    std::map<std::string, std::map<std::size_t, std::vector<int>>> labels;
    for (const auto& j : judgments) {
      const auto* f = std::get_if<FineJudgment>(&j);
      if (!f || (options.include && !options.include(f->summary_id))) continue;
      labels[f->summary_id][f->annotator_slot].push_back(f->label);
    }
    for (const auto& [summary, slots] : labels) {
      for (const auto& [slot, l] : slots) scores[summary][slot] = summary_score_fine(l);
    }
  } else {
    for (const auto& j : judgments) {
      const auto* c = std::get_if<CoarseJudgment>(&j);
      if (!c || (options.include && !options.include(c->summary_id))) continue;
      scores[c->summary_id][c->annotator_slot] = summary_score_coarse(*c);
    }
  }
  if (scores.empty()) throw Error("empty matrix: no summaries matched");

  std::size_t m = 0;
  if (options.annotators) {
    m = *options.annotators;
  } else {
    for (const auto& [_, slots] : scores) m = std::max(m, slots.size());
  }
  std::vector<std::string> ragged;
  for (const auto& [summary, slots] : scores) {
    const bool complete = slots.size() == m && !slots.empty() && slots.rbegin()->first == m - 1;
    if (!complete) ragged.push_back(summary);
  }
  if (!ragged.empty()) {
    throw MissingDataError("ragged data: summaries without exactly " + std::to_string(m) + " slot scores", ragged);
  }

  AnnotationMatrix matrix;
  matrix.provenance = mode;
  matrix.values = Matrix(scores.size(), m);
  std::size_t i = 0;
  for (const auto& [summary, slots] : scores) {
    matrix.summary_ids.push_back(summary);
    for (const auto& [slot, score] : slots) matrix.values(i, slot) = score;
    ++i;
  }
  return matrix;
}

AnnotationMatrix build_matrix(const Corpus& corpus, std::span<const Judgment> judgments, Mode mode,
                              const std::string& system_id) {
  MatrixOptions options;
  options.include = [&](const std::string& summary_id) {
    const Summary* s = corpus.find_summary(summary_id);
    if (!s) throw ReferenceError("judgment references unknown summary_id", summary_id);
    return system_id.empty() || s->system_id == system_id;
  };
  return build_matrix(judgments, mode, options);
}

std::map<std::string, double> system_score(const AnnotationMatrix& matrix,
                                           const std::map<std::string, std::string>& system_of) {
  std::map<std::string, std::pair<double, std::size_t>> sums;
  for (std::size_t i = 0; i < matrix.values.rows(); ++i) {
    const auto it = system_of.find(matrix.summary_ids[i]);
    if (it == system_of.end()) throw ReferenceError("no system for summary", matrix.summary_ids[i]);
    const auto row = matrix.values.row(i);
    const double row_mean = std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(row.size());
    auto& [sum, count] = sums[it->second];
    sum += row_mean;
    ++count;
  }
  std::map<std::string, double> out;
  for (const auto& [system, acc] : sums) out[system] = acc.first / static_cast<double>(acc.second);
  return out;
}

std::map<std::string, std::string> system_lookup(const Corpus& corpus) {
  std::map<std::string, std::string> out;
  for (const Summary& s : corpus.summaries()) out[s.summary_id] = s.system_id;
  return out;
}

void write_matrix_csv(std::ostream& out, const AnnotationMatrix& matrix) {
  csv::Row header{"summary_id"};
  for (std::size_t j = 0; j < matrix.values.cols(); ++j) header.push_back("slot_" + std::to_string(j));
  csv::write_row(out, header);
  for (std::size_t i = 0; i < matrix.values.rows(); ++i) {
    csv::Row row{matrix.summary_ids[i]};
    for (double v : matrix.values.row(i)) row.push_back(csv::format_number(v));
    csv::write_row(out, row);
  }
}

AnnotationMatrix read_matrix_csv(std::istream& in, const std::string& source) {
  const auto records = csv::read(in, source);
  if (records.empty()) throw ParseError(source, 1, "missing header");
  const auto& header = records.front().fields;
  if (header.size() < 2 || header[0] != "summary_id") {
    throw ParseError(source, records.front().line, "header must be summary_id,slot_0,...");
  }
  const std::size_t m = header.size() - 1;
  AnnotationMatrix matrix;
  matrix.values = Matrix(records.size() - 1, m);
  std::set<std::string> seen;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.fields.size() != m + 1) throw ParseError(source, r.line, "expected " + std::to_string(m + 1) + " fields");
    if (!seen.insert(r.fields[0]).second) throw ParseError(source, r.line, "duplicate summary_id " + r.fields[0]);
    matrix.summary_ids.push_back(r.fields[0]);
    for (std::size_t j = 0; j < m; ++j) {
      const auto v = csv::parse_number(r.fields[j + 1]);
      if (!v || *v < 0.0 || *v > 100.0) throw ParseError(source, r.line, "cell must be a number in [0, 100]");
      matrix.values(i - 1, j) = *v;
    }
  }
  return matrix;
}

AnnotationMatrix read_matrix_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_matrix_csv(in, path);
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

}  // namespace longeval
