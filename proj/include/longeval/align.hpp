#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "longeval/corpus.hpp"
#include "longeval/segment.hpp"
#include "longeval/text.hpp"

namespace longeval {

/// (summary_id, unit_index)
using UnitKey = std::pair<std::string, std::size_t>;

struct AlignmentCandidate {
  std::string summary_id;
  std::size_t unit_index = 0;
  std::size_t sentence_index = 0;
  double score = 0.0;
};

/// Descending score, ties broken by ascending sentence index. The result does
/// not depend on the input order.
void rank_candidates(std::vector<AlignmentCandidate>& candidates);

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

/// Tokenizer used by the lexical aligners: lowercase, stopwords removed.
TokenizerOptions alignment_tokenizer(bool stem = false);

/// Okapi BM25 with each source sentence as a document and the source's
/// sentences as the collection. Each distinct unit token contributes
/// idf(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len / avg_len)) with
/// idf(t) = ln(1 + (N - df + 0.5) / (df + 0.5)).
std::vector<AlignmentCandidate> bm25_rank(const FineUnit& unit, const SourceDocument& doc, const Bm25Params& params = {},
                                          const TokenizerOptions& tokenizer = alignment_tokenizer());

/// Clipped unigram-overlap F1 between the unit and each sentence.
std::vector<AlignmentCandidate> rouge1_rank(const FineUnit& unit, const SourceDocument& doc,
                                            const TokenizerOptions& tokenizer = alignment_tokenizer());

/// CSV `summary_id,unit_index,sentence_index,score` of precomputed aligner scores.
std::vector<AlignmentCandidate> read_candidates(std::istream& in, const std::string& source);
std::vector<AlignmentCandidate> read_candidates_file(const std::string& path);
void write_candidates(std::ostream& out, const std::vector<AlignmentCandidate>& candidates);

/// Throws ReferenceError for a candidate whose unit is not in `units` or
/// whose sentence index is out of range for the summary's document.
void validate_candidates(const std::vector<AlignmentCandidate>& candidates, const Corpus& corpus,
                         const std::map<std::string, std::vector<FineUnit>>& units);

/// Ranked candidates per unit.
using Predictions = std::map<UnitKey, std::vector<AlignmentCandidate>>;
Predictions group_candidates(std::vector<AlignmentCandidate> candidates);

struct HintSet {
  std::string summary_id;
  std::size_t unit_index = 0;
  std::vector<std::size_t> highlights;  // sentence indices, best first
  std::vector<double> scores;
  std::string scorer_name;
  double threshold = 0.0;
};

void to_json(nlohmann::json& j, const HintSet& hints);
void from_json(const nlohmann::json& j, HintSet& hints);

/// 0.3 for "superpal" (its native score scale), 0 otherwise.
double default_hint_threshold(const std::string& scorer_name);

/// Keeps candidates scoring at least `threshold`, best first, at most
/// `max_hints` of them. `candidates` must all belong to one unit.
HintSet select_hints(std::vector<AlignmentCandidate> candidates, double threshold, std::size_t max_hints = 5,
                     const std::string& scorer_name = {});

/// Gold supporting sentences per unit; JSONL `{summary_id, unit_index, sentences}`.
using GoldAlignment = std::map<UnitKey, std::set<std::size_t>>;
GoldAlignment read_gold_alignment(std::istream& in, const std::string& source);
GoldAlignment read_gold_alignment_file(const std::string& path);

/// Fraction of gold units with at least one gold sentence among their top k
/// predictions. Throws MissingDataError when a gold unit has no predictions.
double recall_at_k(const Predictions& predictions, const GoldAlignment& gold, std::size_t k);

}  // namespace longeval
