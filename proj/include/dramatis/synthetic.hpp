#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dramatis/corpus.hpp"

namespace dramatis {

// A synthetic play with one character per epsilon: each character's words
// are drawn i.i.d. from (1 - eps) * Zipf(shared base vocabulary)
//                     + eps * Zipf(character-private vocabulary).
// Private vocabularies use disjoint letter shapes, so 3-gram divergence
// tracks word divergence and ground-truth distinctiveness is controlled.
struct SyntheticSpec {
  int base_vocab_size = 5000;
  double zipf_exponent = 1.0;
  // Kept small so the private signal is concentrated: in a shared play the
  // rest-of-cast pool carries every other character's private words, and a
  // flat private vocabulary would drown low-epsilon differences in that
  // contamination.
  int divergent_vocab_size = 50;
  std::vector<double> epsilons = {0.0, 0.5};
  int words_per_character = 20000;
  uint64_t seed = 1;
  std::string play_id = "synthetic";

  static SyntheticSpec from_json(const nlohmann::json& j);
  nlohmann::ordered_json to_json() const;
  void validate() const;  // throws std::invalid_argument
};

PlayDocument generate_play(const SyntheticSpec& spec);

}  // namespace dramatis
