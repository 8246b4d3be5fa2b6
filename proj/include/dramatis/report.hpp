#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dramatis/corpus.hpp"
#include "dramatis/energy.hpp"
#include "dramatis/keyness.hpp"

namespace dramatis {

inline constexpr int64_t kDefaultMinWords = 2000;

struct AnalysisRow {
  std::string corpus_id;
  std::string play_id;
  std::string character_id;
  Gender gender = Gender::unknown;
  int64_t word_count = 0;
  double dialogue_share = 0.0;  // percent of the play's spoken words
  int64_t ngram_vocab_size = 0;
  double distinctiveness = 0.0;
  double d_ci_low = 0.0;
  double d_ci_high = 0.0;
  double baseline = 0.0;
  double baseline_ci_low = 0.0;
  double baseline_ci_high = 0.0;
  double keyness_auc = 0.0;
  std::optional<int> year_composed;
};

struct CorpusSummary {
  std::string corpus_id;
  int64_t total_characters = 0;
  int64_t characters_analysed = 0;
  int64_t unique_3grams = 0;   // union over analysed characters
  int64_t unique_words = 0;    // union over analysed characters
  int64_t total_3grams = 0;    // sum over analysed characters
  int64_t total_words = 0;     // sum over analysed characters
};

struct FilteredCharacter {
  const PlayDocument* play = nullptr;
  const CharacterSpeech* character = nullptr;
};

// Characters speaking at least min_words words (inclusive threshold).
std::vector<FilteredCharacter> filter_characters(std::span<const PlayDocument> plays,
                                                 int64_t min_words = kDefaultMinWords);

using CharacterKey = std::pair<std::string, std::string>;  // (play_id, character_id)

// Joins filtered characters with their estimates/profiles. Missing entries
// are a hard error naming the character. Rows are sorted by
// (corpus, play, character); dialogue share is computed over the play's
// full cast.
std::vector<AnalysisRow> build_rows(
    std::span<const FilteredCharacter> filtered,
    const std::map<CharacterKey, DistinctivenessEstimate>& estimates,
    const std::map<CharacterKey, KeynessProfile>& profiles);

CorpusSummary corpus_summary(std::span<const AnalysisRow> rows,
                             std::span<const PlayDocument> plays,
                             const std::string& corpus_id);

enum class FloatPrecision { six_significant, full };

// RFC-4180 CSV with a fixed header/column order mirroring AnalysisRow.
std::string rows_to_csv(std::span<const AnalysisRow> rows,
                        FloatPrecision precision = FloatPrecision::six_significant);
void export_rows_csv(std::span<const AnalysisRow> rows, const std::filesystem::path& path,
                     FloatPrecision precision = FloatPrecision::six_significant);
std::vector<AnalysisRow> rows_from_csv(const std::string& text);

// JSON-lines export; full precision round-trips doubles exactly.
void export_rows_jsonl(std::span<const AnalysisRow> rows, const std::filesystem::path& path,
                       FloatPrecision precision = FloatPrecision::full);

std::string summaries_to_csv(std::span<const CorpusSummary> summaries);

// Plot-ready bundle, one CSV per figure panel per corpus plus a manifest:
//   <corpus>_dialogue_scatter.csv  (share, distinctiveness, gender)
//   <corpus>_dialogue_trend.csv    (20 equal-count binned medians per gender
//                                   series, plus a baseline series)
//   <corpus>_year_scatter.csv      (rows with a year only)
//   <corpus>_year_trend.csv
//   <corpus>_gender_summary.csv    (median/quartiles/outlier fence per
//                                   gender for share, distinctiveness and
//                                   3-gram vocabulary size)
// Returns the manifest.
nlohmann::ordered_json emit_plot_data(std::span<const AnalysisRow> rows,
                                      const std::filesystem::path& out_dir,
                                      const nlohmann::ordered_json& metadata);

// Regression model matrix: log_D,G,T,S,S2,P. Unknown-gender rows excluded;
// rows with zero distinctiveness dropped (log undefined), count returned.
// Full-precision floats so the matrix round-trips numerically.
struct ModelMatrixStats {
  int64_t rows_written = 0;
  int64_t dropped_unknown_gender = 0;
  int64_t dropped_zero_distinctiveness = 0;
};
ModelMatrixStats export_model_matrix(std::span<const AnalysisRow> rows,
                                     const std::filesystem::path& path);

// Binned-median trend: sorts points by x and cuts them into up to
// `bins` equal-count bins; returns (median x, median y) per bin.
std::vector<std::pair<double, double>> binned_median_trend(
    std::vector<std::pair<double, double>> points, int bins = 20);

std::string contrast_table_to_csv(const ContrastTable& table);
std::string contrast_table_to_text(const ContrastTable& table);

}  // namespace dramatis
