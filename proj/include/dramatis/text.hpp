#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dramatis {

// Lowercases (Unicode-aware) and collapses every maximal run of non-letter
// code points to a single space; leading/trailing space stripped. Apostrophes
// (U+0027, and U+2019 mapped onto it) count as letters.
std::string normalize(std::string_view text);

struct TokenStream {
  std::vector<std::string> words;

  size_t total() const { return words.size(); }
  bool empty() const { return words.empty(); }
};

TokenStream word_tokens(std::string_view text);

// Normalizes each utterance, joins the non-empty results with single spaces,
// and slides a 3-code-point window (step 1, no padding) over the stream.
std::vector<std::string> char_3gram_sequence(std::span<const std::string> utterances);

// Multiset of character 3-grams with a deterministic (sorted) support.
class NgramSample {
 public:
  NgramSample() = default;

  static NgramSample from_utterances(std::span<const std::string> utterances);
  // Grams must each be exactly 3 code points.
  static NgramSample from_grams(std::span<const std::string> grams);
  // Entries must be unique; counts positive. Sorted internally.
  static NgramSample from_counts(std::vector<std::pair<std::string, int64_t>> counts);

  const std::vector<std::pair<std::string, int64_t>>& items() const { return items_; }
  int64_t total() const { return total_; }
  size_t vocab_size() const { return items_.size(); }
  bool empty() const { return total_ == 0; }
  int64_t count_of(std::string_view gram) const;

  void merge(const NgramSample& other);

 private:
  std::vector<std::pair<std::string, int64_t>> items_;  // sorted by gram
  int64_t total_ = 0;
};

// Code-point count of a UTF-8 string.
size_t utf8_length(std::string_view s);

}  // namespace dramatis
