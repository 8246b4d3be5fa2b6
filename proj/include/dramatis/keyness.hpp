#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dramatis/corpus.hpp"
#include "dramatis/text.hpp"

namespace dramatis {

// Word frequency table with real-valued counts (admits deterministic
// upsampling scale factors). Entries sorted by word.
class WordCounts {
 public:
  WordCounts() = default;

  static WordCounts from_tokens(const TokenStream& tokens);
  static WordCounts from_items(std::vector<std::pair<std::string, double>> items);

  const std::vector<std::pair<std::string, double>>& items() const { return items_; }
  double total() const { return total_; }
  bool empty() const { return items_.empty(); }
  double count_of(std::string_view word) const;

  void add(const WordCounts& other);
  void scale(double factor);

 private:
  std::vector<std::pair<std::string, double>> items_;  // sorted by word
  double total_ = 0.0;
};

// Weighted log-odds z-scores with an informative Dirichlet prior
// (Monroe / Colaresi / Quinn style). The prior's support must cover the
// union of a's and b's supports; prior_mass (alpha0) rescales the prior to
// a fixed total pseudo-count. Returns (word, z) for every word in the
// prior support, sorted by word.
std::vector<std::pair<std::string, double>> weighted_log_odds(const WordCounts& a,
                                                              const WordCounts& b,
                                                              const WordCounts& prior,
                                                              double prior_mass);

struct KeynessProfile {
  std::vector<std::pair<std::string, double>> zscores;  // sorted by word
  std::vector<double> top_curve;                        // exactly 100 entries
  std::vector<std::string> top_words;                   // words behind the non-padded entries
  double auc = 0.0;
};

inline constexpr int kKeynessCurveLength = 100;
inline constexpr double kDefaultPriorMass = 500.0;

// Keyness of one character against the pooled speech of the rest of the
// cast: character counts are upsampled by n_other/n_char (count scaling),
// the prior is the pooled play distribution rescaled to prior_mass, and the
// profile is the ranked top-100 z curve with its area (plain sum).
// Ties rank lexicographically by word.
KeynessProfile character_keyness(const TokenStream& character_words,
                                 const TokenStream& other_words,
                                 double prior_mass = kDefaultPriorMass);

// Same computation on prebuilt counts (lets callers reuse pooled counts).
KeynessProfile character_keyness_counts(const WordCounts& character_counts,
                                        const WordCounts& other_counts,
                                        double prior_mass = kDefaultPriorMass);

struct ContrastTable {
  Gender side_a = Gender::female;
  Gender side_b = Gender::male;
  // Per side: the most relatively-frequent words, z reported positive for
  // the owning side. Up to `top_n` rows each.
  std::vector<std::pair<std::string, double>> words_a;
  std::vector<std::pair<std::string, double>> words_b;
};

// Pools all speech per gender across the corpus (raw, unscaled counts;
// corpus-pooled prior) and ranks each side's relatively-more-frequent words.
ContrastTable gender_contrast(std::span<const PlayDocument> corpus, Gender side_a,
                              Gender side_b, double prior_mass = kDefaultPriorMass,
                              int top_n = 40);

}  // namespace dramatis
