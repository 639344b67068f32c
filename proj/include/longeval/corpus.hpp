#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "longeval/text.hpp"

namespace longeval {

struct SourceSentence {
  std::size_t index = 0;
  std::string text;
  Span span;
};

struct SourceDocument {
  std::string doc_id;
  std::string text;
  std::vector<SourceSentence> sentences;
};

struct Summary {
  std::string summary_id;
  std::string doc_id;
  std::string system_id;
  std::string text;
};

/// Validated, immutable set of documents and the summaries written for them.
/// Safe to share between threads once constructed.
class Corpus {
 public:
  Corpus() = default;
  /// Throws DuplicateError on repeated IDs and ReferenceError when a summary
  /// names an unknown document.
  Corpus(std::vector<SourceDocument> documents, std::vector<Summary> summaries);

  const std::vector<SourceDocument>& documents() const { return documents_; }
  const std::vector<Summary>& summaries() const { return summaries_; }

  const SourceDocument* find_document(const std::string& doc_id) const;
  const Summary* find_summary(const std::string& summary_id) const;
  const SourceDocument& document_for(const Summary& summary) const;

  /// system_id -> summary_ids, in input order.
  std::map<std::string, std::vector<std::string>> systems() const;

 private:
  std::vector<SourceDocument> documents_;
  std::vector<Summary> summaries_;
  std::unordered_map<std::string, std::size_t> doc_index_;
  std::unordered_map<std::string, std::size_t> summary_index_;
};

/// One document or summary record; throws ValidationError on bad fields.
SourceDocument parse_document(const nlohmann::json& record);
Summary parse_summary(const nlohmann::json& record);
nlohmann::json document_to_json(const SourceDocument& doc);
nlohmann::json summary_to_json(const Summary& summary);

/// Documents from JSONL `{doc_id, text, [sentences]}`. Text is NFC- and
/// newline-normalized. `sentences` may be strings (located in order within
/// the text) or `{text, start, end}` objects; without it, sentences come from
/// split_sentences.
std::vector<SourceDocument> read_documents(std::istream& in, const std::string& source);
/// Summaries from JSONL `{summary_id, doc_id, system_id, text}`.
std::vector<Summary> read_summaries(std::istream& in, const std::string& source);

Corpus ingest_corpus(const std::string& doc_path, const std::string& summary_path);

/// Canonical JSONL: sorted keys, sentences as strings, one record per line.
void write_documents(std::ostream& out, const Corpus& corpus);
void write_summaries(std::ostream& out, const Corpus& corpus);

/// Externally computed metric values, keyed by summary_id.
struct MetricScoreTable {
  std::string metric_name;
  std::map<std::string, double> scores;
};

/// CSV with header `summary_id,<metric_name>`.
MetricScoreTable read_metric_scores(std::istream& in, const std::string& source);
MetricScoreTable ingest_metric_scores(const std::string& path);
/// Also checks the table against `corpus`: unknown IDs raise ReferenceError,
/// uncovered summaries raise MissingDataError listing them.
MetricScoreTable ingest_metric_scores(const std::string& path, const Corpus& corpus);
void validate_metric_scores(const MetricScoreTable& table, const Corpus& corpus);

}  // namespace longeval
