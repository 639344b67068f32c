#include "longeval/corpus.hpp"

#include <fstream>
#include <ostream>
#include <set>

#include <json.hpp>

#include "longeval/csv.hpp"
#include "longeval/error.hpp"
#include "longeval/jsonl.hpp"
#include "longeval/segment.hpp"

namespace longeval {

Corpus::Corpus(std::vector<SourceDocument> documents, std::vector<Summary> summaries)
    : documents_(std::move(documents)), summaries_(std::move(summaries)) {
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    if (!doc_index_.emplace(documents_[i].doc_id, i).second) {
      throw DuplicateError("duplicate doc_id: " + documents_[i].doc_id);
    }
  }
  for (std::size_t i = 0; i < summaries_.size(); ++i) {
    const Summary& s = summaries_[i];
    if (!summary_index_.emplace(s.summary_id, i).second) {
      throw DuplicateError("duplicate summary_id: " + s.summary_id);
    }
    if (!doc_index_.contains(s.doc_id)) {
      throw ReferenceError("summary " + s.summary_id + " references unknown doc_id", s.doc_id);
    }
  }
}

const SourceDocument* Corpus::find_document(const std::string& doc_id) const {
  const auto it = doc_index_.find(doc_id);
  return it == doc_index_.end() ? nullptr : &documents_[it->second];
}

const Summary* Corpus::find_summary(const std::string& summary_id) const {
  const auto it = summary_index_.find(summary_id);
  return it == summary_index_.end() ? nullptr : &summaries_[it->second];
}

const SourceDocument& Corpus::document_for(const Summary& summary) const {
  return documents_[doc_index_.at(summary.doc_id)];
}

std::map<std::string, std::vector<std::string>> Corpus::systems() const {
  std::map<std::string, std::vector<std::string>> groups;
  for (const Summary& s : summaries_) groups[s.system_id].push_back(s.summary_id);
  return groups;
}

namespace {

std::string required_string(const nlohmann::json& record, const char* key) {
  if (!record.is_object() || !record.contains(key)) throw ValidationError(std::string("missing field \"") + key + "\"");
  const auto& value = record.at(key);
  if (!value.is_string()) throw ValidationError(std::string("field \"") + key + "\" must be a string");
  auto s = value.get<std::string>();
  if (s.empty()) throw ValidationError(std::string("field \"") + key + "\" is empty");
  return s;
}

std::vector<SourceSentence> given_sentences(const nlohmann::json& list, const std::string& text) {
  if (!list.is_array()) throw ValidationError("\"sentences\" must be an array");
  std::vector<SourceSentence> sentences;
  std::size_t cursor = 0;
  for (const auto& item : list) {
    SourceSentence sentence;
    sentence.index = sentences.size();
    if (item.is_string()) {
      sentence.text = normalize_text(item.get<std::string>());
      const auto trimmed = std::string(trim(sentence.text));
      const auto pos = text.find(trimmed, cursor);
      if (trimmed.empty() || pos == std::string::npos) {
        throw ValidationError("sentence " + std::to_string(sentence.index) + " not found in document text");
      }
      sentence.text = trimmed;
      sentence.span = {pos, pos + trimmed.size()};
    } else {
      sentence.span = {item.at("start").get<std::size_t>(), item.at("end").get<std::size_t>()};
      if (sentence.span.end < sentence.span.start || sentence.span.end > text.size() || sentence.span.start < cursor) {
        throw ValidationError("sentence " + std::to_string(sentence.index) + " span out of order or bounds");
      }
      sentence.text = text.substr(sentence.span.start, sentence.span.size());
      if (item.contains("text") && normalize_text(item.at("text").get<std::string>()) != sentence.text) {
        throw ValidationError("sentence " + std::to_string(sentence.index) + " text does not match its span");
      }
    }
    cursor = sentence.span.end;
    sentences.push_back(std::move(sentence));
  }
  return sentences;
}

}  // namespace

SourceDocument parse_document(const nlohmann::json& record) {
  SourceDocument doc;
  doc.doc_id = required_string(record, "doc_id");
  if (!record.contains("text") || !record.at("text").is_string()) throw ValidationError("missing field \"text\"");
  doc.text = normalize_text(record.at("text").get<std::string>());
  if (record.contains("sentences") && !record.at("sentences").is_null()) {
    doc.sentences = given_sentences(record.at("sentences"), doc.text);
  } else {
    for (auto& s : split_sentences(doc.text)) {
      doc.sentences.push_back({doc.sentences.size(), std::move(s.text), s.span});
    }
  }
  return doc;
}

Summary parse_summary(const nlohmann::json& record) {
  Summary s;
  s.summary_id = required_string(record, "summary_id");
  s.doc_id = required_string(record, "doc_id");
  s.system_id = required_string(record, "system_id");
  if (!record.contains("text") || !record.at("text").is_string()) throw ValidationError("missing field \"text\"");
  s.text = normalize_text(record.at("text").get<std::string>());
  return s;
}

nlohmann::json document_to_json(const SourceDocument& doc) {
  nlohmann::json sentences = nlohmann::json::array();
  for (const auto& s : doc.sentences) sentences.push_back(s.text);
  return {{"doc_id", doc.doc_id}, {"sentences", sentences}, {"text", doc.text}};
}

nlohmann::json summary_to_json(const Summary& s) {
  return {{"doc_id", s.doc_id}, {"summary_id", s.summary_id}, {"system_id", s.system_id}, {"text", s.text}};
}

std::vector<SourceDocument> read_documents(std::istream& in, const std::string& source) {
  std::vector<SourceDocument> documents;
  for_each_jsonl(in, source, [&](const nlohmann::json& record, std::size_t) { documents.push_back(parse_document(record)); });
  return documents;
}

std::vector<Summary> read_summaries(std::istream& in, const std::string& source) {
  std::vector<Summary> summaries;
  for_each_jsonl(in, source, [&](const nlohmann::json& record, std::size_t) { summaries.push_back(parse_summary(record)); });
  return summaries;
}

Corpus ingest_corpus(const std::string& doc_path, const std::string& summary_path) {
  std::ifstream docs(doc_path);
  if (!docs) throw Error("cannot open " + doc_path);
  std::ifstream sums(summary_path);
  if (!sums) throw Error("cannot open " + summary_path);
  return Corpus(read_documents(docs, doc_path), read_summaries(sums, summary_path));
}

void write_documents(std::ostream& out, const Corpus& corpus) {
  for (const SourceDocument& doc : corpus.documents()) out << document_to_json(doc).dump() << '\n';
}

void write_summaries(std::ostream& out, const Corpus& corpus) {
  for (const Summary& s : corpus.summaries()) out << summary_to_json(s).dump() << '\n';
}

MetricScoreTable read_metric_scores(std::istream& in, const std::string& source) {
  const auto records = csv::read(in, source);
  if (records.empty()) throw ParseError(source, 1, "missing header");
  const auto& header = records.front();
  if (header.fields.size() != 2 || header.fields[0] != "summary_id" || header.fields[1].empty()) {
    throw ParseError(source, header.line, "header must be summary_id,<metric_name>");
  }
  MetricScoreTable table;
  table.metric_name = header.fields[1];
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.fields.size() != 2 || r.fields[0].empty()) throw ParseError(source, r.line, "expected 2 fields");
    const auto value = csv::parse_number(r.fields[1]);
    if (!value) throw ParseError(source, r.line, "non-numeric score \"" + r.fields[1] + "\"");
    if (!table.scores.emplace(r.fields[0], *value).second) {
      throw ParseError(source, r.line, "duplicate summary_id " + r.fields[0]);
    }
  }
  return table;
}

MetricScoreTable ingest_metric_scores(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_metric_scores(in, path);
}

MetricScoreTable ingest_metric_scores(const std::string& path, const Corpus& corpus) {
  auto table = ingest_metric_scores(path);
  validate_metric_scores(table, corpus);
  return table;
}

void validate_metric_scores(const MetricScoreTable& table, const Corpus& corpus) {
  for (const auto& [id, _] : table.scores) {
    if (!corpus.find_summary(id)) throw ReferenceError("metric " + table.metric_name + " scores unknown summary_id", id);
  }
  std::vector<std::string> missing;
  for (const Summary& s : corpus.summaries()) {
    if (!table.scores.contains(s.summary_id)) missing.push_back(s.summary_id);
  }
  if (!missing.empty()) throw MissingDataError("metric " + table.metric_name + " is missing summaries", missing);
}

}  // namespace longeval
