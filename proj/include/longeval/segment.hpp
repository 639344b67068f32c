#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "longeval/text.hpp"

namespace longeval {

/// A sentence of a larger text; `text` equals the text at `span`.
struct Sentence {
  std::string text;
  Span span;
};

/// Clause-level summary unit, the atomic object of FINE annotation.
struct FineUnit {
  std::string summary_id;
  std::size_t unit_index = 0;
  std::string text;
  Span span;  // into the summary text

  friend bool operator==(const FineUnit&, const FineUnit&) = default;
};

void to_json(nlohmann::json& j, const FineUnit& unit);
void from_json(const nlohmann::json& j, FineUnit& unit);

/// Rules for clause segmentation. Serialized as the `segment` config file.
struct SegmentConfig {
  static constexpr int kRulesVersion = 1;

  std::vector<std::string> conjunctions{"and",   "but",     "or",      "nor",      "so",
                                        "yet",   "while",   "whereas", "because",  "although",
                                        "which", "who",     "where",   "when"};
  std::size_t min_unit_words = 4;

  static SegmentConfig from_json(const nlohmann::json& j);
  static SegmentConfig load(const std::string& path);
  nlohmann::json to_json() const;
};

/// Tokens that never end a sentence when followed by a period, lowercase and
/// without the final period ("dr", "e.g", "fig", ...).
const std::vector<std::string>& sentence_abbreviations();

/// Sentences of `text` in order. Spans are trimmed of surrounding whitespace;
/// gaps between consecutive spans contain only whitespace.
std::vector<Sentence> split_sentences(std::string_view text);

/// Clause units of one sentence. `span` locates the sentence in its summary;
/// unit spans are relative to the summary and unit_index counts from 0.
std::vector<FineUnit> segment_units(std::string_view sentence, Span span,
                                    const SegmentConfig& config = {});

/// split_sentences + segment_units over a whole summary, numbering units
/// consecutively across sentences.
std::vector<FineUnit> segment_summary(std::string_view summary_id, std::string_view text,
                                      const SegmentConfig& config = {});

}  // namespace longeval
