#pragma once

#include <filesystem>
#include <stdexcept>
#include <vector>

#include "dramatis/corpus.hpp"

namespace dramatis {

struct FetchOptions {
  std::filesystem::path cache_dir;
  bool offline = false;  // serve from cache only, never touch the network
  int retries = 3;
};

// Source unreachable / exhausted retries. These are worth retrying later;
// per-play payload problems are reported instead and do not abort the run.
class CorpusFetchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fetches (or reads from cache / local directory) a whole corpus and
// normalizes it to PlayDocument records. Raw payloads are cached verbatim
// under cache_dir/<corpus>/..., so repeat calls are offline-reproducible.
// Plays are returned sorted by play_id.
std::vector<PlayDocument> fetch_corpus(const CorpusDescriptor& descriptor,
                                       const FetchOptions& options, IngestionReport& report);

// Remote payloads -> PlayDocument (exposed for tests and cache tooling).
PlayDocument play_from_api_payloads(const std::string& corpus_id, const std::string& play_id,
                                    const nlohmann::json& play_meta,
                                    const nlohmann::json& characters_json,
                                    const nlohmann::json& spoken_json,
                                    IngestionReport& report);

}  // namespace dramatis
