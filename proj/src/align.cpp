#include "longeval/align.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "longeval/csv.hpp"
#include "longeval/error.hpp"
#include "longeval/jsonl.hpp"

namespace longeval {

void rank_candidates(std::vector<AlignmentCandidate>& candidates) {
  std::sort(candidates.begin(), candidates.end(), [](const AlignmentCandidate& a, const AlignmentCandidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.sentence_index < b.sentence_index;
  });
}

TokenizerOptions alignment_tokenizer(bool stem) {
  TokenizerOptions options;
  options.remove_stopwords = true;
  options.stem = stem;
  return options;
}

std::vector<AlignmentCandidate> bm25_rank(const FineUnit& unit, const SourceDocument& doc, const Bm25Params& params,
                                          const TokenizerOptions& tokenizer) {
  const std::size_t n = doc.sentences.size();
  std::vector<std::unordered_map<std::string, std::size_t>> tf(n);
  std::vector<double> length(n);
  std::unordered_map<std::string, std::size_t> df;
  double total_length = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto tokens = tokenize(doc.sentences[i].text, tokenizer);
    for (const auto& t : tokens) ++tf[i][t];
    for (const auto& [t, _] : tf[i]) ++df[t];
    length[i] = static_cast<double>(tokens.size());
    total_length += length[i];
  }
  const double avg_length = n ? total_length / static_cast<double>(n) : 0.0;

  const auto query = tokenize(unit.text, tokenizer);
  const std::unordered_set<std::string> terms(query.begin(), query.end());

  std::vector<AlignmentCandidate> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double score = 0.0;
    const double norm = avg_length > 0.0 ? length[i] / avg_length : 0.0;
    for (const auto& t : terms) {
      const auto hit = tf[i].find(t);
      if (hit == tf[i].end()) continue;
      const double d = static_cast<double>(df.at(t));
      const double idf = std::log(1.0 + (static_cast<double>(n) - d + 0.5) / (d + 0.5));
      const double f = static_cast<double>(hit->second);
      score += idf * f * (params.k1 + 1.0) / (f + params.k1 * (1.0 - params.b + params.b * norm));
    }
    out.push_back({unit.summary_id, unit.unit_index, i, score});
  }
  rank_candidates(out);
  return out;
}

namespace {

double unigram_f1(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) return 0.0;
  std::unordered_map<std::string, long> counts;
  for (const auto& t : b) ++counts[t];
  std::size_t overlap = 0;
  for (const auto& t : a) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  if (overlap == 0) return 0.0;
  const double p = static_cast<double>(overlap) / static_cast<double>(a.size());
  const double r = static_cast<double>(overlap) / static_cast<double>(b.size());
  return 2.0 * p * r / (p + r);
}

}  // namespace

std::vector<AlignmentCandidate> rouge1_rank(const FineUnit& unit, const SourceDocument& doc,
                                            const TokenizerOptions& tokenizer) {
  const auto query = tokenize(unit.text, tokenizer);
  std::vector<AlignmentCandidate> out;
  out.reserve(doc.sentences.size());
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    out.push_back({unit.summary_id, unit.unit_index, i, unigram_f1(query, tokenize(doc.sentences[i].text, tokenizer))});
  }
  rank_candidates(out);
  return out;
}

std::vector<AlignmentCandidate> read_candidates(std::istream& in, const std::string& source) {
  const auto records = csv::read(in, source);
  if (records.empty()) throw ParseError(source, 1, "missing header");
  const csv::Row expected{"summary_id", "unit_index", "sentence_index", "score"};
  if (records.front().fields.size() < 4 ||
      !std::equal(expected.begin(), expected.end(), records.front().fields.begin())) {
    throw ParseError(source, records.front().line, "header must be summary_id,unit_index,sentence_index,score");
  }
  std::vector<AlignmentCandidate> out;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.fields.size() < 4) throw ParseError(source, r.line, "expected 4 fields");
    if (r.fields[0].empty()) throw ParseError(source, r.line, "missing summary_id");
    const auto unit = csv::parse_integer(r.fields[1]);
    if (!unit || *unit < 0) throw ParseError(source, r.line, "missing or invalid unit_index");
    const auto sentence = csv::parse_integer(r.fields[2]);
    if (!sentence || *sentence < 0) throw ParseError(source, r.line, "invalid sentence_index");
    const auto score = csv::parse_number(r.fields[3]);
    if (!score) throw ParseError(source, r.line, "non-numeric score \"" + r.fields[3] + "\"");
    out.push_back({r.fields[0], static_cast<std::size_t>(*unit), static_cast<std::size_t>(*sentence), *score});
  }
  return out;
}

std::vector<AlignmentCandidate> read_candidates_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_candidates(in, path);
}

void write_candidates(std::ostream& out, const std::vector<AlignmentCandidate>& candidates) {
  csv::write_row(out, {"summary_id", "unit_index", "sentence_index", "score"});
  for (const auto& c : candidates) {
    csv::write_row(out, {c.summary_id, std::to_string(c.unit_index), std::to_string(c.sentence_index),
                         csv::format_number(c.score)});
  }
}

void validate_candidates(const std::vector<AlignmentCandidate>& candidates, const Corpus& corpus,
                         const std::map<std::string, std::vector<FineUnit>>& units) {
  for (const auto& c : candidates) {
    const std::string key = c.summary_id + "/unit " + std::to_string(c.unit_index);
    const auto it = units.find(c.summary_id);
    const Summary* summary = corpus.find_summary(c.summary_id);
    if (it == units.end() || !summary || c.unit_index >= it->second.size()) {
      throw ReferenceError("alignment score for unknown unit", key);
    }
    if (c.sentence_index >= corpus.document_for(*summary).sentences.size()) {
      throw ReferenceError("alignment score for unknown source sentence", key + "/sentence " + std::to_string(c.sentence_index));
    }
  }
}

Predictions group_candidates(std::vector<AlignmentCandidate> candidates) {
  Predictions out;
  for (auto& c : candidates) {
    UnitKey key{c.summary_id, c.unit_index};
    out[key].push_back(std::move(c));
  }
  for (auto& [_, list] : out) rank_candidates(list);
  return out;
}

void to_json(nlohmann::json& j, const HintSet& h) {
  j = {{"summary_id", h.summary_id}, {"unit_index", h.unit_index}, {"highlights", h.highlights},
       {"scores", h.scores},         {"scorer", h.scorer_name},     {"threshold", h.threshold}};
}

void from_json(const nlohmann::json& j, HintSet& h) {
  j.at("summary_id").get_to(h.summary_id);
  j.at("unit_index").get_to(h.unit_index);
  j.at("highlights").get_to(h.highlights);
  h.scores = j.value("scores", std::vector<double>{});
  h.scorer_name = j.value("scorer", std::string{});
  h.threshold = j.value("threshold", 0.0);
  if (h.highlights.size() > 5) throw ValidationError("a hint set holds at most 5 highlights");
}

double default_hint_threshold(const std::string& scorer_name) {
  std::string lower = scorer_name;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  return lower == "superpal" ? 0.3 : 0.0;
}

HintSet select_hints(std::vector<AlignmentCandidate> candidates, double threshold, std::size_t max_hints,
                     const std::string& scorer_name) {
  HintSet hints;
  hints.scorer_name = scorer_name;
  hints.threshold = threshold;
  if (!candidates.empty()) {
    hints.summary_id = candidates.front().summary_id;
    hints.unit_index = candidates.front().unit_index;
  }
  for (const auto& c : candidates) {
    if (c.summary_id != hints.summary_id || c.unit_index != hints.unit_index) {
      throw ValidationError("select_hints given candidates of more than one unit");
    }
  }
  rank_candidates(candidates);
  for (const auto& c : candidates) {
    if (hints.highlights.size() >= max_hints) break;
    if (c.score < threshold) continue;
    hints.highlights.push_back(c.sentence_index);
    hints.scores.push_back(c.score);
  }
  return hints;
}

GoldAlignment read_gold_alignment(std::istream& in, const std::string& source) {
  GoldAlignment gold;
  for_each_jsonl(in, source, [&](const nlohmann::json& j, std::size_t line) {
    UnitKey key{j.at("summary_id").get<std::string>(), j.at("unit_index").get<std::size_t>()};
    auto sentences = j.at("sentences").get<std::set<std::size_t>>();
    if (sentences.empty()) throw ParseError(source, line, "gold alignment without sentences");
    if (!gold.emplace(std::move(key), std::move(sentences)).second) throw ParseError(source, line, "duplicate unit");
  });
  return gold;
}

GoldAlignment read_gold_alignment_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_gold_alignment(in, path);
}

double recall_at_k(const Predictions& predictions, const GoldAlignment& gold, std::size_t k) {
  if (k == 0) throw ValidationError("recall@k needs k >= 1");
  if (gold.empty()) throw ValidationError("recall@k over zero gold units");
  std::size_t hits = 0;
  std::vector<std::string> missing;
  for (const auto& [key, sentences] : gold) {
    if (sentences.empty()) throw ValidationError("gold unit without sentences: " + key.first);
    const auto it = predictions.find(key);
    if (it == predictions.end()) {
      missing.push_back(key.first + "/unit " + std::to_string(key.second));
      continue;
    }
    const auto& ranked = it->second;
    const std::size_t depth = std::min(k, ranked.size());
    for (std::size_t r = 0; r < depth; ++r) {
      if (sentences.contains(ranked[r].sentence_index)) {
        ++hits;
        break;
      }
    }
  }
  if (!missing.empty()) throw MissingDataError("gold units missing from predictions", missing);
  return static_cast<double>(hits) / static_cast<double>(gold.size());
}

}  // namespace longeval
