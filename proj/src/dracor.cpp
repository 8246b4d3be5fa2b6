#include "dramatis/dracor.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <optional>
#include <thread>

#include "httplib.h"

#include "dramatis/tei.hpp"
#include "dramatis/text.hpp"
#include "dramatis/xml.hpp"

namespace dramatis {

namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const fs::path& path, std::string_view data) {
  fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
  }
  fs::rename(tmp, path);
}

std::string collapse_whitespace(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending = false;
  for (char c : raw) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      pending = true;
      continue;
    }
    if (pending && !out.empty()) out.push_back(' ');
    pending = false;
    out.push_back(c);
  }
  return out;
}

struct ApiBase {
  std::string host;  // scheme://host[:port]
  std::string prefix;
};

ApiBase split_base_url(const std::string& url) {
  const size_t scheme = url.find("://");
  if (scheme == std::string::npos)
    throw CorpusFetchError("base URL must include a scheme: " + url);
  const size_t path = url.find('/', scheme + 3);
  if (path == std::string::npos) return {url, ""};
  std::string prefix = url.substr(path);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, path), prefix};
}

// Fetch-through cache for one corpus: raw payloads stored verbatim, one file
// per resource, plus a manifest with retrieval timestamps.
class CachedApi {
 public:
  CachedApi(const CorpusDescriptor& descriptor, const FetchOptions& options)
      : descriptor_(descriptor),
        options_(options),
        corpus_dir_(options.cache_dir / descriptor.corpus_id) {
    const fs::path manifest = corpus_dir_ / "manifest.json";
    if (fs::exists(manifest)) {
      try {
        manifest_ = nlohmann::ordered_json::parse(read_file(manifest));
      } catch (const std::exception&) {
        manifest_ = nlohmann::ordered_json::object();
      }
    } else {
      manifest_ = nlohmann::ordered_json::object();
    }
    if (!manifest_.contains("resources")) manifest_["resources"] = nlohmann::ordered_json::object();
  }

  ~CachedApi() {
    try {
      flush_manifest();
    } catch (const std::exception&) {
      // unwinding: the manifest is advisory, the payload files are already on disk
    }
  }

  // Returns payload bytes, from cache when present. nullopt = HTTP 404.
  std::optional<std::string> get(const std::string& api_path, const fs::path& cache_name) {
    const fs::path file = corpus_dir_ / cache_name;
    if (fs::exists(file)) return read_file(file);
    if (fs::exists(file.string() + ".missing")) return std::nullopt;
    if (options_.offline)
      throw CorpusFetchError("offline mode and '" + cache_name.string() + "' is not cached");
    auto payload = http_get(api_path);
    const auto now = std::chrono::system_clock::now();
    const auto stamp =
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    if (payload) {
      write_file(file, *payload);
    } else {
      write_file(file.string() + ".missing", "");
    }
    manifest_["resources"][cache_name.generic_string()] = {
        {"path", api_path}, {"fetched_at_unix", stamp}, {"found", payload.has_value()}};
    manifest_dirty_ = true;
    return payload;
  }

  void flush_manifest() {
    if (!manifest_dirty_) return;
    manifest_["corpus"] = descriptor_.corpus_id;
    manifest_["base_url"] = descriptor_.base_locator;
    write_file(corpus_dir_ / "manifest.json", manifest_.dump(2) + "\n");
    manifest_dirty_ = false;
  }

 private:
  std::optional<std::string> http_get(const std::string& api_path) {
    const ApiBase base = split_base_url(descriptor_.base_locator);
    std::string last_error;
    for (int attempt = 0; attempt <= options_.retries; ++attempt) {
      if (attempt > 0)
        std::this_thread::sleep_for(std::chrono::milliseconds(200 * attempt));
      httplib::Client client(base.host);
      client.set_connection_timeout(10);
      client.set_read_timeout(60);
      client.set_follow_location(true);
      auto res = client.Get(base.prefix + api_path);
      if (!res) {
        last_error = "transport error: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status == 404) return std::nullopt;
      if (res->status >= 500) {
        last_error = "server error " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200) {
        throw CorpusFetchError("GET " + api_path + " returned status " +
                               std::to_string(res->status));
      }
      return res->body;
    }
    throw CorpusFetchError("GET " + api_path + " failed after " +
                           std::to_string(options_.retries + 1) + " attempts (retryable): " +
                           last_error);
  }

  const CorpusDescriptor& descriptor_;
  const FetchOptions& options_;
  fs::path corpus_dir_;
  nlohmann::ordered_json manifest_;
  bool manifest_dirty_ = false;
};

std::string author_names(const nlohmann::json& play_meta) {
  std::string authors;
  if (play_meta.contains("authors") && play_meta["authors"].is_array()) {
    for (const auto& a : play_meta["authors"]) {
      std::string name;
      if (a.is_object()) name = a.value("name", a.value("fullname", std::string{}));
      else if (a.is_string()) name = a.get<std::string>();
      if (name.empty()) continue;
      if (!authors.empty()) authors += "; ";
      authors += name;
    }
  }
  if (authors.empty() && play_meta.contains("author")) {
    const auto& a = play_meta["author"];
    if (a.is_object()) authors = a.value("name", std::string{});
    else if (a.is_string()) authors = a.get<std::string>();
  }
  return authors;
}

std::optional<int> year_from_meta(const nlohmann::json& play_meta) {
  if (!play_meta.contains("yearNormalized")) return std::nullopt;
  const auto& y = play_meta["yearNormalized"];
  if (y.is_number_integer()) return y.get<int>();
  if (y.is_string()) {
    try {
      return std::stoi(y.get<std::string>());
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::vector<PlayDocument> fetch_remote(const CorpusDescriptor& descriptor,
                                       const FetchOptions& options, IngestionReport& report) {
  CachedApi api(descriptor, options);
  const std::string corpus_path = "/corpora/" + descriptor.corpus_id;
  auto index_payload = api.get(corpus_path, "index.json");
  if (!index_payload)
    throw CorpusFetchError("corpus index not found: " + descriptor.corpus_id);

  nlohmann::json index = nlohmann::json::parse(*index_payload);
  if (!index.contains("plays") || !index["plays"].is_array())
    throw CorpusFetchError("corpus index for " + descriptor.corpus_id + " has no plays array");

  // Deterministic order regardless of index order.
  std::vector<nlohmann::json> plays(index["plays"].begin(), index["plays"].end());
  std::sort(plays.begin(), plays.end(), [](const auto& a, const auto& b) {
    return a.value("name", std::string{}) < b.value("name", std::string{});
  });

  std::vector<PlayDocument> documents;
  documents.reserve(plays.size());
  for (const auto& meta : plays) {
    const std::string name = meta.value("name", std::string{});
    if (name.empty()) {
      report.error(descriptor.corpus_id, "", "index entry without a play name");
      continue;
    }
    const std::string play_path = corpus_path + "/plays/" + name;
    try {
      auto characters_payload =
          api.get(play_path + "/characters", fs::path(name) / "characters.json");
      auto spoken_payload = api.get(play_path + "/spoken-text-by-character",
                                    fs::path(name) / "spoken.json");
      if (characters_payload && spoken_payload) {
        documents.push_back(play_from_api_payloads(
            descriptor.corpus_id, name, meta, nlohmann::json::parse(*characters_payload),
            nlohmann::json::parse(*spoken_payload), report));
      } else {
        // Endpoint not available for this play: fall back to the TEI source.
        auto tei_payload = api.get(play_path + "/tei", fs::path(name) / "tei.xml");
        if (!tei_payload) {
          report.error(descriptor.corpus_id, name, "no spoken-text or TEI resource available");
          continue;
        }
        PlayDocument play = parse_tei(*tei_payload, name, &report, descriptor.corpus_id);
        play.play_id = name;  // corpus key, stable across cache layouts
        if (!play.year_composed) play.year_composed = year_from_meta(meta);
        if (play.title.empty()) play.title = meta.value("title", std::string{});
        if (play.author.empty()) play.author = author_names(meta);
        documents.push_back(std::move(play));
      }
    } catch (const CorpusFetchError&) {
      api.flush_manifest();
      throw;
    } catch (const std::exception& e) {
      report.error(descriptor.corpus_id, name, std::string("malformed payload: ") + e.what());
    }
  }
  api.flush_manifest();
  return documents;
}

std::vector<PlayDocument> ingest_local(const CorpusDescriptor& descriptor,
                                       IngestionReport& report) {
  const fs::path dir(descriptor.base_locator);
  if (!fs::exists(dir) || !fs::is_directory(dir))
    throw CorpusFetchError("local corpus directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext == ".xml" || ext == ".tei") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty())
    report.warn(descriptor.corpus_id, "", "no plays found in " + dir.string());

  std::vector<PlayDocument> documents;
  documents.reserve(files.size());
  for (const auto& file : files) {
    try {
      PlayDocument play =
          parse_tei(read_file(file), file.stem().string(), &report, descriptor.corpus_id);
      documents.push_back(std::move(play));
    } catch (const XmlParseError& e) {
      report.error(descriptor.corpus_id, file.stem().string(),
                   std::string("XML parse error: ") + e.what());
    } catch (const std::exception& e) {
      report.error(descriptor.corpus_id, file.stem().string(), e.what());
    }
  }
  return documents;
}

}  // namespace

PlayDocument play_from_api_payloads(const std::string& corpus_id, const std::string& play_id,
                                    const nlohmann::json& play_meta,
                                    const nlohmann::json& characters_json,
                                    const nlohmann::json& spoken_json,
                                    IngestionReport& report) {
  PlayDocument play;
  play.corpus_id = corpus_id;
  play.play_id = play_id;
  play.title = play_meta.value("title", std::string{});
  play.author = author_names(play_meta);
  play.year_composed = year_from_meta(play_meta);

  std::map<std::string, size_t> index_by_id;
  for (const auto& cj : characters_json) {
    CharacterSpeech character;
    character.character_id = cj.value("id", std::string{});
    if (character.character_id.empty()) {
      report.warn(corpus_id, play_id, "character entry without an id");
      continue;
    }
    character.gender = gender_from_string(cj.value("gender", std::string{}));
    character.is_group = cj.value("isGroup", false);
    if (index_by_id.contains(character.character_id)) continue;
    index_by_id.emplace(character.character_id, play.characters.size());
    play.characters.push_back(std::move(character));
  }

  for (const auto& entry : spoken_json) {
    const std::string id = entry.value("id", std::string{});
    if (id.empty()) {
      report.warn(corpus_id, play_id, "spoken-text entry without an id");
      continue;
    }
    auto it = index_by_id.find(id);
    if (it == index_by_id.end()) {
      CharacterSpeech character;
      character.character_id = id;
      character.gender = gender_from_string(entry.value("gender", std::string{}));
      character.is_group = entry.value("isGroup", false);
      index_by_id.emplace(id, play.characters.size());
      play.characters.push_back(std::move(character));
      it = index_by_id.find(id);
      report.warn(corpus_id, play_id,
                  "spoken text for '" + id + "' has no declared character");
    }
    if (entry.contains("text") && entry["text"].is_array())
      for (const auto& line : entry["text"])
        if (line.is_string())
          play.characters[it->second].utterances.push_back(
              collapse_whitespace(line.get<std::string>()));
  }

  for (auto& character : play.characters)
    character.word_count = spoken_word_count(character.utterances);

  if (play.characters.empty())
    throw std::runtime_error("play has no characters in API payloads");
  return play;
}

std::vector<PlayDocument> fetch_corpus(const CorpusDescriptor& descriptor,
                                       const FetchOptions& options, IngestionReport& report) {
  if (descriptor.corpus_id.empty())
    throw std::invalid_argument("fetch_corpus: corpus_id must be non-empty");
  std::vector<PlayDocument> documents =
      descriptor.source == CorpusDescriptor::Source::local_directory
          ? ingest_local(descriptor, report)
          : fetch_remote(descriptor, options, report);
  std::sort(documents.begin(), documents.end(),
            [](const PlayDocument& a, const PlayDocument& b) { return a.play_id < b.play_id; });
  return documents;
}

}  // namespace dramatis
