#pragma once

#include <span>
#include <vector>

#include "dramatis/report.hpp"

namespace dramatis {

struct AnalysisConfig {
  int64_t min_words = kDefaultMinWords;
  BootstrapConfig bootstrap;
  double prior_mass = kDefaultPriorMass;
  int threads = 1;  // 0 = hardware concurrency

  void validate() const;  // throws std::invalid_argument listing every violation
};

struct AnalysisOutput {
  std::vector<AnalysisRow> rows;
  std::vector<CorpusSummary> summaries;  // one per corpus id, sorted
};

// Runs the full per-character analysis over a set of ingested plays:
// applies the word-count filter, computes the bootstrap distinctiveness
// estimate and keyness profile per analysable character on a worker pool,
// and assembles sorted rows and per-corpus summaries. Character substream
// seeds derive from (seed, corpus, play, character), so the output is
// byte-identical for any thread count.
AnalysisOutput analyze_plays(std::span<const PlayDocument> plays, const AnalysisConfig& config,
                             IngestionReport& report);

}  // namespace dramatis
