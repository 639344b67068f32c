#include "longeval/metrics.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>
#include <vector>

#include "longeval/error.hpp"

namespace longeval {
namespace {

std::string join_ngram(const std::vector<std::string>& tokens, std::size_t start, int n) {
  std::string g = tokens[start];
  for (int k = 1; k < n; ++k) {
    g.push_back(' ');
    g += tokens[start + static_cast<std::size_t>(k)];
  }
  return g;
}

std::map<std::string, std::size_t> ngram_counts(const std::vector<std::string>& tokens, int n) {
  std::map<std::string, std::size_t> counts;
  const auto len = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + len <= tokens.size(); ++i) ++counts[join_ngram(tokens, i, n)];
  return counts;
}

RougeScore make_score(std::string variant, double overlap, double candidate_total, double reference_total) {
  RougeScore s;
  s.variant = std::move(variant);
  s.precision = candidate_total > 0 ? overlap / candidate_total : 0.0;
  s.recall = reference_total > 0 ? overlap / reference_total : 0.0;
  s.f1 = (s.precision + s.recall) > 0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  return s;
}

}  // namespace

TokenizerOptions metric_tokenizer(bool stem) {
  TokenizerOptions options;
  options.stem = stem;
  return options;
}

RougeScore rouge_n(std::string_view candidate, std::string_view reference, int n, const TokenizerOptions& tokenizer) {
  if (n != 1 && n != 2) throw ValidationError("ROUGE-N supports n = 1 or 2");
  const auto cand = ngram_counts(tokenize(candidate, tokenizer), n);
  const auto ref = ngram_counts(tokenize(reference, tokenizer), n);
  double overlap = 0.0, cand_total = 0.0, ref_total = 0.0;
  for (const auto& [g, c] : cand) {
    cand_total += static_cast<double>(c);
    const auto it = ref.find(g);
    if (it != ref.end()) overlap += static_cast<double>(std::min(c, it->second));
  }
  for (const auto& [_, c] : ref) ref_total += static_cast<double>(c);
  return make_score(std::to_string(n), overlap, cand_total, ref_total);
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

RougeScore rouge_l(std::string_view candidate, std::string_view reference, const TokenizerOptions& tokenizer) {
  const auto cand = tokenize(candidate, tokenizer);
  const auto ref = tokenize(reference, tokenizer);
  const auto lcs = static_cast<double>(lcs_length(cand, ref));
  return make_score("L", lcs, static_cast<double>(cand.size()), static_cast<double>(ref.size()));
}

double extractiveness(std::string_view summary, std::string_view source, int n, const TokenizerOptions& tokenizer) {
  if (n < 1) throw ValidationError("extractiveness needs n >= 1");
  const auto sum_tokens = tokenize(summary, tokenizer);
  const auto src_tokens = tokenize(source, tokenizer);
  const auto len = static_cast<std::size_t>(n);
  if (sum_tokens.size() < len) return 0.0;
  std::unordered_set<std::string> source_ngrams;
  for (std::size_t i = 0; i + len <= src_tokens.size(); ++i) source_ngrams.insert(join_ngram(src_tokens, i, n));
  std::size_t present = 0, total = 0;
  for (std::size_t i = 0; i + len <= sum_tokens.size(); ++i) {
    ++total;
    if (source_ngrams.contains(join_ngram(sum_tokens, i, n))) ++present;
  }
  return static_cast<double>(present) / static_cast<double>(total);
}

}  // namespace longeval
