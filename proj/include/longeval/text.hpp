#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace longeval {

/// Half-open byte range [start, end) into a UTF-8 string.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool contains(std::size_t pos) const { return pos >= start && pos < end; }
  friend bool operator==(const Span&, const Span&) = default;
};

/// Unicode NFC followed by CRLF/CR -> LF. Throws ValidationError on invalid UTF-8.
std::string normalize_text(std::string_view text);

bool is_space(char c);
std::string_view trim(std::string_view text);

/// Shrinks `span` so it starts and ends on non-whitespace of `text`.
Span trim_span(std::string_view text, Span span);

/// Number of alphanumeric word tokens (bytes >= 0x80 count as word characters).
std::size_t count_words(std::string_view text);

struct TokenizerOptions {
  bool lowercase = true;
  bool remove_stopwords = false;
  bool stem = false;
};

/// Lowercases ASCII, splits on non-alphanumerics, optionally drops stopwords
/// and applies the Porter stemmer. Shared by alignment and lexical metrics.
std::vector<std::string> tokenize(std::string_view text, const TokenizerOptions& options = {});

bool is_stopword(std::string_view token);

/// Porter (1980) suffix-stripping stemmer for lowercase ASCII words.
std::string porter_stem(std::string_view word);

}  // namespace longeval
