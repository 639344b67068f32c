#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "longeval/text.hpp"

namespace longeval {

struct RougeScore {
  std::string variant;  // "1", "2" or "L"
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Same tokenizer as the aligners, but stopwords are kept by default.
TokenizerOptions metric_tokenizer(bool stem = false);

/// N-gram overlap with counts clipped to the reference. n must be 1 or 2.
RougeScore rouge_n(std::string_view candidate, std::string_view reference, int n,
                   const TokenizerOptions& tokenizer = metric_tokenizer());

/// Token-level longest-common-subsequence precision/recall/F1.
RougeScore rouge_l(std::string_view candidate, std::string_view reference,
                   const TokenizerOptions& tokenizer = metric_tokenizer());

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

/// Fraction of the summary's n-gram occurrences that also occur in the source.
/// 0 for a summary with fewer than n tokens.
double extractiveness(std::string_view summary, std::string_view source, int n = 2,
                      const TokenizerOptions& tokenizer = metric_tokenizer());

}  // namespace longeval
