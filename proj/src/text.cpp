#include "dramatis/text.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace dramatis {

namespace {

constexpr UChar32 kApostrophe = 0x27;
constexpr UChar32 kRightSingleQuote = 0x2019;

bool is_letterish(UChar32 c) {
  return c == kApostrophe || c == kRightSingleQuote || u_isalpha(c);
}

void append_utf8(std::string& out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  int32_t i = 0;
  UBool err = false;
  U8_APPEND(reinterpret_cast<uint8_t*>(buf), i, U8_MAX_LENGTH, c, err);
  if (!err) out.append(buf, static_cast<size_t>(i));
}

}  // namespace

std::string normalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const int32_t len = static_cast<int32_t>(text.size());
  int32_t i = 0;
  bool pending_space = false;
  while (i < len) {
    UChar32 c;
    U8_NEXT(s, i, len, c);
    if (c < 0) continue;  // invalid byte sequence: treat as a separator
    if (is_letterish(c)) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      if (c == kRightSingleQuote) c = kApostrophe;
      append_utf8(out, u_tolower(c));
    } else {
      pending_space = true;
    }
  }
  return out;
}

TokenStream word_tokens(std::string_view text) {
  TokenStream stream;
  const std::string norm = normalize(text);
  size_t start = 0;
  while (start < norm.size()) {
    size_t end = norm.find(' ', start);
    if (end == std::string::npos) end = norm.size();
    if (end > start) stream.words.emplace_back(norm.substr(start, end - start));
    start = end + 1;
  }
  return stream;
}

std::vector<std::string> char_3gram_sequence(std::span<const std::string> utterances) {
  std::string stream;
  for (const auto& utterance : utterances) {
    std::string norm = normalize(utterance);
    if (norm.empty()) continue;
    if (!stream.empty()) stream.push_back(' ');
    stream += norm;
  }
  // Byte offsets of code-point starts; window = 3 consecutive code points.
  std::vector<size_t> starts;
  starts.reserve(stream.size() + 1);
  const auto* s = reinterpret_cast<const uint8_t*>(stream.data());
  const int32_t len = static_cast<int32_t>(stream.size());
  int32_t i = 0;
  while (i < len) {
    starts.push_back(static_cast<size_t>(i));
    U8_FWD_1(s, i, len);
  }
  starts.push_back(stream.size());
  std::vector<std::string> grams;
  if (starts.size() < 4) return grams;  // fewer than 3 code points
  const size_t n = starts.size() - 1;
  grams.reserve(n - 2);
  for (size_t k = 0; k + 3 <= n; ++k)
    grams.emplace_back(stream.substr(starts[k], starts[k + 3] - starts[k]));
  return grams;
}

NgramSample NgramSample::from_utterances(std::span<const std::string> utterances) {
  const auto grams = char_3gram_sequence(utterances);
  NgramSample sample;
  std::unordered_map<std::string, int64_t> acc;
  acc.reserve(grams.size());
  for (const auto& g : grams) ++acc[g];
  sample.items_.assign(acc.begin(), acc.end());
  std::sort(sample.items_.begin(), sample.items_.end());
  sample.total_ = static_cast<int64_t>(grams.size());
  return sample;
}

NgramSample NgramSample::from_grams(std::span<const std::string> grams) {
  std::unordered_map<std::string, int64_t> acc;
  acc.reserve(grams.size());
  for (const auto& g : grams) {
    if (utf8_length(g) != 3)
      throw std::invalid_argument("NgramSample: gram is not 3 code points: " + g);
    ++acc[g];
  }
  NgramSample sample;
  sample.items_.assign(acc.begin(), acc.end());
  std::sort(sample.items_.begin(), sample.items_.end());
  sample.total_ = static_cast<int64_t>(grams.size());
  return sample;
}

NgramSample NgramSample::from_counts(std::vector<std::pair<std::string, int64_t>> counts) {
  NgramSample sample;
  sample.items_ = std::move(counts);
  std::sort(sample.items_.begin(), sample.items_.end());
  for (size_t i = 0; i < sample.items_.size(); ++i) {
    const auto& [gram, count] = sample.items_[i];
    if (count <= 0) throw std::invalid_argument("NgramSample: non-positive count for " + gram);
    if (utf8_length(gram) != 3)
      throw std::invalid_argument("NgramSample: gram is not 3 code points: " + gram);
    if (i > 0 && sample.items_[i - 1].first == gram)
      throw std::invalid_argument("NgramSample: duplicate gram " + gram);
    sample.total_ += count;
  }
  return sample;
}

int64_t NgramSample::count_of(std::string_view gram) const {
  auto it = std::lower_bound(items_.begin(), items_.end(), gram,
                             [](const auto& item, std::string_view g) { return item.first < g; });
  if (it != items_.end() && it->first == gram) return it->second;
  return 0;
}

void NgramSample::merge(const NgramSample& other) {
  std::vector<std::pair<std::string, int64_t>> merged;
  merged.reserve(items_.size() + other.items_.size());
  auto a = items_.begin();
  auto b = other.items_.begin();
  while (a != items_.end() || b != other.items_.end()) {
    if (b == other.items_.end() || (a != items_.end() && a->first < b->first)) {
      merged.push_back(*a++);
    } else if (a == items_.end() || b->first < a->first) {
      merged.push_back(*b++);
    } else {
      merged.emplace_back(a->first, a->second + b->second);
      ++a;
      ++b;
    }
  }
  items_ = std::move(merged);
  total_ += other.total_;
}

size_t utf8_length(std::string_view str) {
  const auto* s = reinterpret_cast<const uint8_t*>(str.data());
  const int32_t len = static_cast<int32_t>(str.size());
  int32_t i = 0;
  size_t n = 0;
  while (i < len) {
    U8_FWD_1(s, i, len);
    ++n;
  }
  return n;
}

}  // namespace dramatis
