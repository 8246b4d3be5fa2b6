#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace dramatis {

enum class Gender { female, male, unknown };

const char* to_string(Gender g);
Gender gender_from_string(std::string_view s);  // case-insensitive; unrecognized -> unknown

struct CharacterSpeech {
  std::string character_id;
  Gender gender = Gender::unknown;
  std::vector<std::string> utterances;  // spoken text only, document order
  int64_t word_count = 0;
  bool is_group = false;
};

struct PlayDocument {
  std::string corpus_id;
  std::string play_id;
  std::string title;
  std::string author;
  std::optional<int> year_composed;
  std::vector<CharacterSpeech> characters;

  int64_t total_spoken_words() const;
  const CharacterSpeech* find_character(std::string_view id) const;
};

struct CorpusDescriptor {
  enum class Source { remote_api, local_directory };

  std::string corpus_id;
  Source source = Source::remote_api;
  std::string base_locator;  // API base URL or filesystem directory
};

// Collects per-play warnings/errors without aborting a corpus run.
// Thread-safe for concurrent appends.
class IngestionReport {
 public:
  struct Entry {
    std::string severity;  // "warning" | "error"
    std::string corpus_id;
    std::string play_id;
    std::string message;
  };

  void warn(std::string corpus_id, std::string play_id, std::string message);
  void error(std::string corpus_id, std::string play_id, std::string message);

  std::vector<Entry> entries() const;
  size_t error_count() const;
  void write_jsonl(const std::filesystem::path& path) const;

 private:
  mutable std::mutex mutex_;
  std::vector<Entry> entries_;
};

// Stable serialization: equal documents produce byte-identical JSON.
nlohmann::ordered_json to_json(const PlayDocument& play);
PlayDocument play_from_json(const nlohmann::json& j);

// Recomputes a character's word_count from its utterances.
int64_t spoken_word_count(const std::vector<std::string>& utterances);

}  // namespace dramatis
