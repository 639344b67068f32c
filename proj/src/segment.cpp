#include "longeval/segment.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "longeval/error.hpp"

namespace longeval {

void to_json(nlohmann::json& j, const FineUnit& unit) {
  j = nlohmann::json{{"summary_id", unit.summary_id},
                     {"unit_index", unit.unit_index},
                     {"text", unit.text},
                     {"start", unit.span.start},
                     {"end", unit.span.end}};
}

void from_json(const nlohmann::json& j, FineUnit& unit) {
  j.at("summary_id").get_to(unit.summary_id);
  j.at("unit_index").get_to(unit.unit_index);
  j.at("text").get_to(unit.text);
  j.at("start").get_to(unit.span.start);
  j.at("end").get_to(unit.span.end);
  if (unit.span.end < unit.span.start) throw ValidationError("unit span end precedes start");
}

SegmentConfig SegmentConfig::from_json(const nlohmann::json& j) {
  SegmentConfig config;
  if (j.contains("rules_version") && j.at("rules_version").get<int>() != kRulesVersion) {
    throw ValidationError("unsupported segmentation rules_version " + j.at("rules_version").dump());
  }
  if (j.contains("conjunctions")) {
    config.conjunctions = j.at("conjunctions").get<std::vector<std::string>>();
    for (auto& c : config.conjunctions) {
      std::transform(c.begin(), c.end(), c.begin(), [](unsigned char ch) { return std::tolower(ch); });
    }
  }
  if (j.contains("min_unit_words")) config.min_unit_words = j.at("min_unit_words").get<std::size_t>();
  return config;
}

SegmentConfig SegmentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path, 0, e.what());
  }
}

nlohmann::json SegmentConfig::to_json() const {
  return {{"rules_version", kRulesVersion}, {"conjunctions", conjunctions}, {"min_unit_words", min_unit_words}};
}

const std::vector<std::string>& sentence_abbreviations() {
  static const std::vector<std::string> list{
      "dr",   "mr",   "mrs",  "ms",   "prof", "sr",  "jr",  "st",   "mt",   "fig",  "figs",
      "eq",   "eqs",  "e.g",  "i.e",  "vs",   "cf",  "al",  "approx", "vol", "pp",  "dept",
      "gen",  "gov",  "sgt",  "capt", "col",  "lt",  "cmdr", "adm", "rev",  "hon",  "inc",
      "ltd",  "corp", "jan",  "feb",  "aug",  "sep", "sept", "oct", "nov",  "dec",  "u.s",
      "ph.d", "a.m",  "p.m"};
  return list;
}

namespace {

bool is_alnum_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || u >= 0x80;
}

bool starts_with_at(std::string_view text, std::size_t pos, std::string_view needle) {
  return text.substr(pos, needle.size()) == needle;
}

// Length of a closing quote/bracket at `pos`, 0 if none.
std::size_t closer_length(std::string_view text, std::size_t pos) {
  const char c = text[pos];
  if (c == '"' || c == '\'' || c == ')' || c == ']') return 1;
  if (starts_with_at(text, pos, "\xE2\x80\x9D") || starts_with_at(text, pos, "\xE2\x80\x99")) return 3;
  return 0;
}

bool is_abbreviation(std::string_view text, std::size_t period) {
  std::size_t start = period;
  while (start > 0 && (is_alnum_byte(text[start - 1]) || text[start - 1] == '.')) --start;
  if (start == period) return false;
  std::string token(text.substr(start, period - start));
  std::transform(token.begin(), token.end(), token.begin(), [](unsigned char ch) { return std::tolower(ch); });
  const auto& list = sentence_abbreviations();
  return std::find(list.begin(), list.end(), token) != list.end();
}

}  // namespace

std::vector<Sentence> split_sentences(std::string_view text) {
  std::vector<Sentence> sentences;
  std::size_t begin = 0;
  auto emit = [&](std::size_t end) {
    const Span span = trim_span(text, {begin, end});
    if (span.size() > 0) sentences.push_back({std::string(text.substr(span.start, span.size())), span});
    begin = end;
  };

  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      // A blank line always ends a sentence.
      std::size_t j = i + 1;
      while (j < text.size() && (text[j] == ' ' || text[j] == '\t' || text[j] == '\r')) ++j;
      if (j < text.size() && text[j] == '\n') {
        emit(i);
        i = j + 1;
        continue;
      }
      ++i;
      continue;
    }
    if (c != '.' && c != '?' && c != '!') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && (text[j] == '.' || text[j] == '?' || text[j] == '!')) ++j;
    const bool single_period = (j == i + 1 && c == '.');
    while (j < text.size()) {
      const std::size_t len = closer_length(text, j);
      if (len == 0) break;
      j += len;
    }
    const bool at_break = (j == text.size() || is_space(text[j]));
    if (at_break && !(single_period && is_abbreviation(text, i))) emit(j);
    i = j;
  }
  emit(text.size());
  return sentences;
}

std::vector<FineUnit> segment_units(std::string_view sentence, Span span, const SegmentConfig& config) {
  auto is_conjunction = [&](std::string_view word) {
    std::string lower(word);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
    return std::find(config.conjunctions.begin(), config.conjunctions.end(), lower) != config.conjunctions.end();
  };

  // Cut points: offsets where a new unit starts (relative to `sentence`).
  std::vector<std::size_t> cuts;
  std::size_t i = 0;
  while (i < sentence.size()) {
    std::size_t delim_end = 0;
    bool semicolon = false;
    const char c = sentence[i];
    if (c == ',' || c == ';') {
      delim_end = i + 1;
      semicolon = (c == ';');
    } else if (starts_with_at(sentence, i, "--")) {
      delim_end = i + 2;
    } else if (starts_with_at(sentence, i, "\xE2\x80\x94")) {  // em dash
      delim_end = i + 3;
    } else if ((c == '-' || starts_with_at(sentence, i, "\xE2\x80\x93")) && i > 0 && is_space(sentence[i - 1])) {
      delim_end = i + (c == '-' ? 1 : 3);  // spaced hyphen or en dash
      if (delim_end < sentence.size() && !is_space(sentence[delim_end])) delim_end = 0;
    }
    if (delim_end == 0) {
      ++i;
      continue;
    }
    std::size_t word_start = delim_end;
    while (word_start < sentence.size() && is_space(sentence[word_start])) ++word_start;
    std::size_t word_end = word_start;
    while (word_end < sentence.size() && std::isalpha(static_cast<unsigned char>(sentence[word_end]))) ++word_end;
    if (word_start < sentence.size() &&
        (semicolon || (word_end > word_start && is_conjunction(sentence.substr(word_start, word_end - word_start))))) {
      cuts.push_back(word_start);
    }
    i = delim_end;
  }

  std::vector<Span> pieces;
  std::size_t start = 0;
  for (std::size_t cut : cuts) {
    const Span piece = trim_span(sentence, {start, cut});
    if (piece.size() > 0) pieces.push_back(piece);
    start = cut;
  }
  const Span last = trim_span(sentence, {start, sentence.size()});
  if (last.size() > 0) pieces.push_back(last);

  auto words = [&](Span s) { return count_words(sentence.substr(s.start, s.size())); };
  std::vector<Span> merged;
  for (const Span& piece : pieces) {
    if (!merged.empty() && words(piece) < config.min_unit_words) {
      merged.back().end = piece.end;
    } else {
      merged.push_back(piece);
    }
  }
  if (merged.size() > 1 && words(merged.front()) < config.min_unit_words) {
    merged[1].start = merged[0].start;
    merged.erase(merged.begin());
  }

  std::vector<FineUnit> units;
  for (const Span& piece : merged) {
    FineUnit unit;
    unit.unit_index = units.size();
    unit.text = std::string(sentence.substr(piece.start, piece.size()));
    unit.span = {span.start + piece.start, span.start + piece.end};
    units.push_back(std::move(unit));
  }
  return units;
}

std::vector<FineUnit> segment_summary(std::string_view summary_id, std::string_view text,
                                      const SegmentConfig& config) {
  std::vector<FineUnit> units;
  for (const Sentence& sentence : split_sentences(text)) {
    for (FineUnit& unit : segment_units(sentence.text, sentence.span, config)) {
      unit.summary_id = std::string(summary_id);
      unit.unit_index = units.size();
      units.push_back(std::move(unit));
    }
  }
  return units;
}

}  // namespace longeval
