#include "dramatis/corpus.hpp"

#include <fstream>

#include "dramatis/text.hpp"

namespace dramatis {

const char* to_string(Gender g) {
  switch (g) {
    case Gender::female: return "female";
    case Gender::male: return "male";
    default: return "unknown";
  }
}

Gender gender_from_string(std::string_view s) {
  std::string lower;
  lower.reserve(s.size());
  for (char c : s) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "female" || lower == "f") return Gender::female;
  if (lower == "male" || lower == "m") return Gender::male;
  return Gender::unknown;
}

int64_t spoken_word_count(const std::vector<std::string>& utterances) {
  int64_t n = 0;
  for (const auto& u : utterances) n += static_cast<int64_t>(word_tokens(u).total());
  return n;
}

int64_t PlayDocument::total_spoken_words() const {
  int64_t n = 0;
  for (const auto& c : characters) n += c.word_count;
  return n;
}

const CharacterSpeech* PlayDocument::find_character(std::string_view id) const {
  for (const auto& c : characters)
    if (c.character_id == id) return &c;
  return nullptr;
}

void IngestionReport::warn(std::string corpus_id, std::string play_id, std::string message) {
  std::lock_guard lock(mutex_);
  entries_.push_back({"warning", std::move(corpus_id), std::move(play_id), std::move(message)});
}

void IngestionReport::error(std::string corpus_id, std::string play_id, std::string message) {
  std::lock_guard lock(mutex_);
  entries_.push_back({"error", std::move(corpus_id), std::move(play_id), std::move(message)});
}

std::vector<IngestionReport::Entry> IngestionReport::entries() const {
  std::lock_guard lock(mutex_);
  return entries_;
}

size_t IngestionReport::error_count() const {
  std::lock_guard lock(mutex_);
  size_t n = 0;
  for (const auto& e : entries_)
    if (e.severity == "error") ++n;
  return n;
}

void IngestionReport::write_jsonl(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write ingestion report: " + path.string());
  for (const auto& e : entries()) {
    nlohmann::ordered_json j;
    j["severity"] = e.severity;
    j["corpus"] = e.corpus_id;
    j["play"] = e.play_id;
    j["message"] = e.message;
    out << j.dump() << '\n';
  }
}

nlohmann::ordered_json to_json(const PlayDocument& play) {
  nlohmann::ordered_json j;
  j["corpus"] = play.corpus_id;
  j["play"] = play.play_id;
  j["title"] = play.title;
  j["author"] = play.author;
  if (play.year_composed)
    j["year_composed"] = *play.year_composed;
  else
    j["year_composed"] = nullptr;
  auto chars = nlohmann::ordered_json::array();
  for (const auto& c : play.characters) {
    nlohmann::ordered_json cj;
    cj["id"] = c.character_id;
    cj["gender"] = to_string(c.gender);
    cj["is_group"] = c.is_group;
    cj["word_count"] = c.word_count;
    cj["utterances"] = c.utterances;
    chars.push_back(std::move(cj));
  }
  j["characters"] = std::move(chars);
  return j;
}

PlayDocument play_from_json(const nlohmann::json& j) {
  PlayDocument play;
  play.corpus_id = j.at("corpus").get<std::string>();
  play.play_id = j.at("play").get<std::string>();
  play.title = j.value("title", std::string{});
  play.author = j.value("author", std::string{});
  if (j.contains("year_composed") && !j.at("year_composed").is_null())
    play.year_composed = j.at("year_composed").get<int>();
  for (const auto& cj : j.at("characters")) {
    CharacterSpeech c;
    c.character_id = cj.at("id").get<std::string>();
    c.gender = gender_from_string(cj.value("gender", std::string{"unknown"}));
    c.is_group = cj.value("is_group", false);
    c.utterances = cj.at("utterances").get<std::vector<std::string>>();
    c.word_count = cj.contains("word_count") ? cj.at("word_count").get<int64_t>()
                                             : spoken_word_count(c.utterances);
    play.characters.push_back(std::move(c));
  }
  return play;
}

}  // namespace dramatis
