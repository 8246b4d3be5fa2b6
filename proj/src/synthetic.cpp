#include "dramatis/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dramatis/rng.hpp"

namespace dramatis {

namespace {

// Inverse-CDF sampler over a finite ranked Zipf vocabulary: P(k) ~ k^-s.
class ZipfTable {
 public:
  ZipfTable(int size, double exponent) {
    cumulative_.reserve(static_cast<size_t>(size));
    double acc = 0.0;
    for (int k = 1; k <= size; ++k) {
      acc += std::pow(static_cast<double>(k), -exponent);
      cumulative_.push_back(acc);
    }
  }

  // 0-based rank.
  int sample(Xoshiro256ss& rng) const {
    const double u = rng.uniform() * cumulative_.back();
    const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
    return static_cast<int>(it - cumulative_.begin());
  }

  double probability(int rank) const {
    const double lo = rank == 0 ? 0.0 : cumulative_[static_cast<size_t>(rank) - 1];
    return (cumulative_[static_cast<size_t>(rank)] - lo) / cumulative_.back();
  }

 private:
  std::vector<double> cumulative_;
};

// Word shapes with disjoint 3-gram spaces. Base words use only a-m. Private
// words interleave a per-character marker letter between code letters, so
// every 3-gram window inside a private word contains that character's marker
// and cannot collide with another character's private grams (only the shared
// space-boundary grams overlap, and those cancel in any distance).
constexpr char kBaseAlphabet[] = "abcdefghijklm";
constexpr char kPrivateAlphabet[] = "nopqrstuvwxyz";

std::string spell(int value, const char* alphabet, size_t alphabet_size) {
  std::string out;
  do {
    out.push_back(alphabet[static_cast<size_t>(value) % alphabet_size]);
    value /= static_cast<int>(alphabet_size);
  } while (value > 0);
  return out;
}

std::string base_word(int rank) { return "b" + spell(rank, kBaseAlphabet, 13); }

// Greek then Cyrillic lowercase letters; letters for the normalizer, yet
// disjoint from both Latin alphabets above.
std::string marker_letter(int character_index) {
  const uint32_t cp = character_index < 25
                          ? 0x03B1 + static_cast<uint32_t>(character_index)
                          : 0x0430 + static_cast<uint32_t>(character_index - 25);
  std::string out;
  out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
  out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  return out;
}

std::string private_word(int character_index, int rank) {
  const std::string marker = marker_letter(character_index);
  std::string out = marker;
  for (char c : spell(rank, kPrivateAlphabet, 13)) {
    out.push_back(c);
    out += marker;
  }
  return out;
}

constexpr size_t kMaxCharacters = 25 + 32;  // distinct marker letters available

}  // namespace

void SyntheticSpec::validate() const {
  std::vector<std::string> problems;
  if (base_vocab_size <= 0) problems.push_back("base_vocab_size must be positive");
  if (divergent_vocab_size <= 0) problems.push_back("divergent_vocab_size must be positive");
  if (words_per_character <= 0) problems.push_back("words_per_character must be positive");
  if (epsilons.empty()) problems.push_back("epsilons must be non-empty");
  if (epsilons.size() > kMaxCharacters)
    problems.push_back("at most " + std::to_string(kMaxCharacters) + " characters supported");
  for (double e : epsilons)
    if (e < 0.0 || e > 1.0) {
      problems.push_back("every epsilon must lie in [0,1]");
      break;
    }
  if (!problems.empty()) {
    std::string msg = "invalid synthetic spec:";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw std::invalid_argument(msg);
  }
}

SyntheticSpec SyntheticSpec::from_json(const nlohmann::json& j) {
  SyntheticSpec spec;
  spec.base_vocab_size = j.value("base_vocab_size", spec.base_vocab_size);
  spec.zipf_exponent = j.value("zipf_exponent", spec.zipf_exponent);
  spec.divergent_vocab_size = j.value("divergent_vocab_size", spec.divergent_vocab_size);
  if (j.contains("epsilons")) spec.epsilons = j.at("epsilons").get<std::vector<double>>();
  spec.words_per_character = j.value("words_per_character", spec.words_per_character);
  spec.seed = j.value("seed", spec.seed);
  spec.play_id = j.value("play_id", spec.play_id);
  spec.validate();
  return spec;
}

nlohmann::ordered_json SyntheticSpec::to_json() const {
  nlohmann::ordered_json j;
  j["base_vocab_size"] = base_vocab_size;
  j["zipf_exponent"] = zipf_exponent;
  j["divergent_vocab_size"] = divergent_vocab_size;
  j["epsilons"] = epsilons;
  j["words_per_character"] = words_per_character;
  j["seed"] = seed;
  j["play_id"] = play_id;
  return j;
}

PlayDocument generate_play(const SyntheticSpec& spec) {
  spec.validate();
  const ZipfTable base(spec.base_vocab_size, spec.zipf_exponent);
  const ZipfTable divergent(spec.divergent_vocab_size, spec.zipf_exponent);

  PlayDocument play;
  play.corpus_id = "synthetic";
  play.play_id = spec.play_id;
  play.title = "Synthetic mixture play";
  play.author = "generator";

  constexpr int kWordsPerUtterance = 12;
  for (size_t ci = 0; ci < spec.epsilons.size(); ++ci) {
    const double eps = spec.epsilons[ci];
    CharacterSpeech character;
    character.character_id = "c" + std::string(ci < 10 ? "0" : "") + std::to_string(ci);
    character.gender = ci % 2 == 0 ? Gender::female : Gender::male;

    Xoshiro256ss rng(derive_seed(spec.seed, static_cast<uint64_t>(ci)));
    std::string utterance;
    int in_utterance = 0;
    for (int w = 0; w < spec.words_per_character; ++w) {
      const bool from_private = rng.uniform() < eps;
      const std::string word = from_private
                                   ? private_word(static_cast<int>(ci), divergent.sample(rng))
                                   : base_word(base.sample(rng));
      if (!utterance.empty()) utterance.push_back(' ');
      utterance += word;
      if (++in_utterance == kWordsPerUtterance) {
        character.utterances.push_back(std::move(utterance));
        utterance.clear();
        in_utterance = 0;
      }
    }
    if (!utterance.empty()) character.utterances.push_back(std::move(utterance));
    character.word_count = spec.words_per_character;
    play.characters.push_back(std::move(character));
  }
  return play;
}

}  // namespace dramatis
