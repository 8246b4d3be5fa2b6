#include "dramatis/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "dramatis/rng.hpp"

namespace dramatis {

namespace {

NgramSample sample_difference(const NgramSample& pool, const NgramSample& part) {
  std::vector<std::pair<std::string, int64_t>> remaining;
  remaining.reserve(pool.items().size());
  auto p = pool.items().begin();
  auto q = part.items().begin();
  while (p != pool.items().end()) {
    if (q != part.items().end() && p->first == q->first) {
      const int64_t count = p->second - q->second;
      if (count < 0)
        throw std::logic_error("sample_difference: part exceeds pool for " + p->first);
      if (count > 0) remaining.emplace_back(p->first, count);
      ++p;
      ++q;
    } else {
      remaining.push_back(*p);
      ++p;
    }
  }
  if (q != part.items().end())
    throw std::logic_error("sample_difference: part not contained in pool");
  return NgramSample::from_counts(std::move(remaining));
}

WordCounts counts_difference(const WordCounts& pool, const WordCounts& part) {
  std::vector<std::pair<std::string, double>> remaining;
  remaining.reserve(pool.items().size());
  auto p = pool.items().begin();
  auto q = part.items().begin();
  while (p != pool.items().end()) {
    if (q != part.items().end() && p->first == q->first) {
      const double count = p->second - q->second;
      if (count < 0.0)
        throw std::logic_error("counts_difference: part exceeds pool for " + p->first);
      if (count > 0.0) remaining.emplace_back(p->first, count);
      ++p;
      ++q;
    } else {
      remaining.push_back(*p);
      ++p;
    }
  }
  if (q != part.items().end())
    throw std::logic_error("counts_difference: part not contained in pool");
  return WordCounts::from_items(std::move(remaining));
}

WordCounts character_word_counts(const CharacterSpeech& character) {
  std::map<std::string, double> acc;
  for (const auto& utterance : character.utterances)
    for (auto& word : word_tokens(utterance).words) acc[word] += 1.0;
  return WordCounts::from_items({acc.begin(), acc.end()});
}

// Per-play pools, built once the first worker needs them and released when
// the play's last character finishes.
struct PlayCache {
  NgramSample gram_pool;
  WordCounts word_pool;
  std::map<std::string, NgramSample> character_grams;
  std::map<std::string, WordCounts> character_words;
};

struct PlayWork {
  const PlayDocument* play = nullptr;
  std::once_flag built;
  std::unique_ptr<PlayCache> cache;
  std::atomic<int> remaining{0};
};

struct Task {
  PlayWork* work = nullptr;
  const CharacterSpeech* character = nullptr;
  // Results:
  bool ok = false;
  std::string skip_reason;
  DistinctivenessEstimate estimate;
  KeynessProfile profile;
};

void build_cache(PlayWork& work, const std::vector<const CharacterSpeech*>& targets) {
  auto cache = std::make_unique<PlayCache>();
  for (const auto& character : work.play->characters) {
    NgramSample grams = NgramSample::from_utterances(character.utterances);
    cache->gram_pool.merge(grams);
    WordCounts words = character_word_counts(character);
    cache->word_pool.add(words);
    // Only targets need their own samples retained.
    for (const CharacterSpeech* t : targets)
      if (t == &character) {
        cache->character_grams.emplace(character.character_id, std::move(grams));
        cache->character_words.emplace(character.character_id, std::move(words));
        break;
      }
  }
  work.cache = std::move(cache);
}

}  // namespace

void AnalysisConfig::validate() const {
  std::vector<std::string> problems;
  if (min_words < 0) problems.push_back("min_words must be >= 0");
  if (!bootstrap.diagnostic_no_resample && bootstrap.replicates < 2)
    problems.push_back("bootstrap replicates must be >= 2 to form a confidence interval");
  if (bootstrap.ci_level <= 0.0 || bootstrap.ci_level >= 1.0)
    problems.push_back("ci_level must lie strictly between 0 and 1");
  if (prior_mass <= 0.0) problems.push_back("prior_mass must be > 0");
  if (threads < 0) problems.push_back("threads must be >= 0");
  if (!problems.empty()) {
    std::string msg = "invalid analysis configuration:";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw std::invalid_argument(msg);
  }
}

AnalysisOutput analyze_plays(std::span<const PlayDocument> plays, const AnalysisConfig& config,
                             IngestionReport& report) {
  config.validate();

  const auto filtered = filter_characters(plays, config.min_words);

  // Word-count based skips are decided up front; the surviving set is what
  // build_rows sees.
  std::map<const PlayDocument*, std::unique_ptr<PlayWork>> work_by_play;
  std::vector<Task> tasks;
  std::vector<FilteredCharacter> analysable;
  for (const auto& entry : filtered) {
    const int64_t play_words = entry.play->total_spoken_words();
    const int64_t other_words = play_words - entry.character->word_count;
    if (other_words <= 0) {
      report.warn(entry.play->corpus_id, entry.play->play_id,
                  "character '" + entry.character->character_id +
                      "' skipped: no other speech in the play to compare against");
      continue;
    }
    if (other_words < config.min_words) {
      report.warn(entry.play->corpus_id, entry.play->play_id,
                  "character '" + entry.character->character_id +
                      "' skipped: rest-of-cast pool has only " + std::to_string(other_words) +
                      " words");
      continue;
    }
    auto& work = work_by_play[entry.play];
    if (!work) {
      work = std::make_unique<PlayWork>();
      work->play = entry.play;
    }
    work->remaining.fetch_add(1, std::memory_order_relaxed);
    tasks.push_back({work.get(), entry.character});
    analysable.push_back(entry);
  }

  // Target lists per play, for cache construction.
  std::map<const PlayWork*, std::vector<const CharacterSpeech*>> targets;
  for (const auto& task : tasks) targets[task.work].push_back(task.character);

  auto run_task = (+[](Task& task, const AnalysisConfig& cfg,
                       const std::vector<const CharacterSpeech*>& target_list) {
    PlayWork& work = *task.work;
    std::call_once(work.built, build_cache, std::ref(work), std::cref(target_list));
    const PlayCache& cache = *work.cache;
    const auto& grams = cache.character_grams.at(task.character->character_id);
    const auto& words = cache.character_words.at(task.character->character_id);
    const NgramSample other_grams = sample_difference(cache.gram_pool, grams);
    const WordCounts other_words = counts_difference(cache.word_pool, words);
    if (grams.empty() || other_grams.empty() || words.empty() || other_words.empty()) {
      task.skip_reason = "empty 3-gram or word sample";
    } else {
      BootstrapConfig bootstrap = cfg.bootstrap;
      bootstrap.threads = 1;  // parallelism lives at the character level
      bootstrap.seed = derive_seed(
          cfg.bootstrap.seed,
          fnv1a64(work.play->corpus_id + '\x1f' + work.play->play_id + '\x1f' +
                  task.character->character_id));
      try {
        task.estimate = bootstrap_distinctiveness(grams, other_grams, bootstrap);
        task.profile = character_keyness_counts(words, other_words, cfg.prior_mass);
        task.ok = true;
      } catch (const std::exception& e) {
        // degenerate pools (e.g. a one-word vocabulary) must not take the
        // run down; the character is skipped and reported
        task.skip_reason = e.what();
      }
    }
    if (work.remaining.fetch_sub(1, std::memory_order_acq_rel) == 1)
      work.cache.reset();  // last character of this play
  });

  int threads = config.threads;
  if (threads == 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 1 || tasks.size() < 2) {
    for (auto& task : tasks) run_task(task, config, targets.at(task.work));
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const size_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= tasks.size()) return;
        run_task(tasks[i], config, targets.at(tasks[i].work));
      }
    };
    std::vector<std::thread> pool;
    const int count = std::min<int>(threads, static_cast<int>(tasks.size()));
    pool.reserve(static_cast<size_t>(count));
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::map<CharacterKey, DistinctivenessEstimate> estimates;
  std::map<CharacterKey, KeynessProfile> profiles;
  std::vector<FilteredCharacter> completed;
  for (size_t i = 0; i < tasks.size(); ++i) {
    if (!tasks[i].ok) {
      report.warn(analysable[i].play->corpus_id, analysable[i].play->play_id,
                  "character '" + analysable[i].character->character_id +
                      "' skipped: " + tasks[i].skip_reason);
      continue;
    }
    const CharacterKey key{analysable[i].play->play_id,
                           analysable[i].character->character_id};
    estimates.emplace(key, std::move(tasks[i].estimate));
    profiles.emplace(key, std::move(tasks[i].profile));
    completed.push_back(analysable[i]);
  }

  AnalysisOutput output;
  output.rows = build_rows(completed, estimates, profiles);

  std::vector<std::string> corpora;
  for (const auto& play : plays)
    if (std::find(corpora.begin(), corpora.end(), play.corpus_id) == corpora.end())
      corpora.push_back(play.corpus_id);
  std::sort(corpora.begin(), corpora.end());
  for (const auto& corpus : corpora)
    output.summaries.push_back(corpus_summary(output.rows, plays, corpus));
  return output;
}

}  // namespace dramatis
