#include <string>
#include <vector>

#include "doctest.h"
#include "dramatis/rng.hpp"
#include "dramatis/text.hpp"

using namespace dramatis;

TEST_CASE("normalize collapses non-letters and lowercases") {
  CHECK(normalize("Ab, cd!") == "ab cd");
  CHECK(normalize("") == "");
  CHECK(normalize("Zwey—bey  FREYLICH") == "zwey bey freylich");
  CHECK(normalize("  hello  ") == "hello");
  CHECK(normalize("a1b2c") == "a b c");
  CHECK(normalize("?!.,;") == "");
}

TEST_CASE("normalize is unicode-aware") {
  CHECK(normalize("Élève") == "élève");        // Élève
  CHECK(normalize("ПРИВЕТ, мир") == "привет мир");
  CHECK(normalize("GRÜSSE") == "grüsse");                // GRÜSSE
  CHECK(normalize("straẞe") == "straße");                // capital sharp s
}

TEST_CASE("apostrophes are kept as letters") {
  CHECK(normalize("an't please") == "an't please");
  CHECK(normalize("L’Amour") == "l'amour");  // typographic apostrophe folded
}

TEST_CASE("normalize is idempotent") {
  const std::vector<std::string> cases = {
      "Ab, cd!", "Zwey—bey  FREYLICH", "L’Amour, hélas...", "ПРИВЕТ, мир",
      "it's--done", "", "   ", "123", "mêlée d'armes"};
  for (const auto& s : cases) {
    const std::string once = normalize(s);
    CHECK(normalize(once) == once);
  }
}

TEST_CASE("word_tokens splits the normalized stream") {
  const auto t = word_tokens("ab cd");
  REQUIRE(t.total() == 2);
  CHECK(t.words[0] == "ab");
  CHECK(t.words[1] == "cd");
  CHECK(word_tokens("").total() == 0);
}

TEST_CASE("word_tokens on a dialect sample line") {
  const auto t = word_tokens("Your grandfather of famous memory, an't please your");
  const std::vector<std::string> expected = {"your", "grandfather", "of",     "famous",
                                             "memory", "an't",       "please", "your"};
  CHECK(t.words == expected);
}

TEST_CASE("3-gram window slides over code points") {
  const std::vector<std::string> one = {"ab cd"};
  const auto grams = char_3gram_sequence(one);
  const std::vector<std::string> expected = {"ab ", "b c", " cd"};
  CHECK(grams == expected);

  const std::vector<std::string> small = {"ab"};
  CHECK(char_3gram_sequence(small).empty());

  // Joining two utterances matches the pre-joined stream.
  const std::vector<std::string> split = {"ab", "cd"};
  CHECK(char_3gram_sequence(split) == expected);
}

TEST_CASE("3-grams count multibyte code points, not bytes") {
  const std::vector<std::string> utterances = {"héé"};  // héé: 3 code points
  const auto grams = char_3gram_sequence(utterances);
  REQUIRE(grams.size() == 1);
  CHECK(grams[0] == "héé");
  CHECK(utf8_length(grams[0]) == 3);
}

TEST_CASE("empty utterances do not inject separators") {
  const std::vector<std::string> utterances = {"ab", "!!!", "cd"};
  const std::vector<std::string> expected = {"ab ", "b c", " cd"};
  CHECK(char_3gram_sequence(utterances) == expected);
}

TEST_CASE("gram count law: total = stream length - 2") {
  Xoshiro256ss rng(3);
  const std::string alphabet = "ab c.é!x";
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> utterances(1 + rng.below(4));
    for (auto& u : utterances) {
      const size_t len = rng.below(30);
      for (size_t i = 0; i < len; ++i) {
        // crude code-point-aware pick from the alphabet
        static const std::vector<std::string> pool = {"a", "b", " ", "c", ".", "é", "!", "x"};
        u += pool[rng.below(pool.size())];
      }
    }
    // Reference stream assembled from the same public pieces.
    std::string stream;
    for (const auto& u : utterances) {
      const std::string n = normalize(u);
      if (n.empty()) continue;
      if (!stream.empty()) stream.push_back(' ');
      stream += n;
    }
    const size_t cp = utf8_length(stream);
    const auto sample = NgramSample::from_utterances(utterances);
    const int64_t expected = cp >= 3 ? static_cast<int64_t>(cp) - 2 : 0;
    CHECK(sample.total() == expected);
    CHECK(sample.vocab_size() <= static_cast<size_t>(sample.total()));
  }
}

TEST_CASE("NgramSample counts and merge") {
  const std::vector<std::string> utterances = {"abab"};
  // stream 'abab': grams aba, bab, aba? no: positions aba, bab -> total 2
  const auto sample = NgramSample::from_utterances(utterances);
  CHECK(sample.total() == 2);
  CHECK(sample.vocab_size() == 2);
  CHECK(sample.count_of("aba") == 1);
  CHECK(sample.count_of("bab") == 1);
  CHECK(sample.count_of("zzz") == 0);

  NgramSample merged = sample;
  merged.merge(sample);
  CHECK(merged.total() == 4);
  CHECK(merged.vocab_size() == 2);
  CHECK(merged.count_of("aba") == 2);
}

TEST_CASE("NgramSample validates gram shape") {
  const std::vector<std::string> bad = {"ab"};
  CHECK_THROWS_AS(NgramSample::from_grams(bad), std::invalid_argument);
  const std::vector<std::string> good = {"abc", "abc", "xyz"};
  const auto sample = NgramSample::from_grams(good);
  CHECK(sample.total() == 3);
  CHECK(sample.vocab_size() == 2);
  CHECK_THROWS_AS(NgramSample::from_counts({{"abc", 0}}), std::invalid_argument);
  CHECK_THROWS_AS(NgramSample::from_counts({{"abc", 1}, {"abc", 2}}), std::invalid_argument);
}
