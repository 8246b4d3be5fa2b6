#include "dramatis/report.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "dramatis/csv.hpp"
#include "dramatis/stats.hpp"
#include "dramatis/text.hpp"

namespace dramatis {

namespace {

const std::vector<std::string> kRowHeader = {
    "corpus_id",      "play_id",       "character_id",
    "gender",         "word_count",    "dialogue_share",
    "ngram_vocab_size", "distinctiveness", "d_ci_low",
    "d_ci_high",      "baseline",      "baseline_ci_low",
    "baseline_ci_high", "keyness_auc", "year_composed"};

std::string format_double(double v, FloatPrecision precision) {
  return precision == FloatPrecision::full ? csv::format_exact(v) : csv::format_g6(v);
}

std::vector<std::string> row_fields(const AnalysisRow& row, FloatPrecision precision) {
  return {row.corpus_id,
          row.play_id,
          row.character_id,
          to_string(row.gender),
          std::to_string(row.word_count),
          format_double(row.dialogue_share, precision),
          std::to_string(row.ngram_vocab_size),
          format_double(row.distinctiveness, precision),
          format_double(row.d_ci_low, precision),
          format_double(row.d_ci_high, precision),
          format_double(row.baseline, precision),
          format_double(row.baseline_ci_low, precision),
          format_double(row.baseline_ci_high, precision),
          format_double(row.keyness_auc, precision),
          row.year_composed ? std::to_string(*row.year_composed) : std::string{}};
}

double quantile_of(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  return quantile_sorted(values, q);
}

}  // namespace

std::vector<FilteredCharacter> filter_characters(std::span<const PlayDocument> plays,
                                                 int64_t min_words) {
  std::vector<FilteredCharacter> filtered;
  for (const auto& play : plays)
    for (const auto& character : play.characters)
      if (character.word_count >= min_words) filtered.push_back({&play, &character});
  return filtered;
}

std::vector<AnalysisRow> build_rows(
    std::span<const FilteredCharacter> filtered,
    const std::map<CharacterKey, DistinctivenessEstimate>& estimates,
    const std::map<CharacterKey, KeynessProfile>& profiles) {
  std::vector<AnalysisRow> rows;
  rows.reserve(filtered.size());
  for (const auto& [play, character] : filtered) {
    const int64_t play_words = play->total_spoken_words();
    const int64_t other_words = play_words - character->word_count;
    if (other_words <= 0) continue;  // degenerate: no cast to compare against
    const CharacterKey key{play->play_id, character->character_id};
    const auto estimate = estimates.find(key);
    const auto profile = profiles.find(key);
    if (estimate == estimates.end())
      throw std::runtime_error("missing distinctiveness estimate for " + play->play_id + "/" +
                               character->character_id);
    if (profile == profiles.end())
      throw std::runtime_error("missing keyness profile for " + play->play_id + "/" +
                               character->character_id);
    AnalysisRow row;
    row.corpus_id = play->corpus_id;
    row.play_id = play->play_id;
    row.character_id = character->character_id;
    row.gender = character->gender;
    row.word_count = character->word_count;
    row.dialogue_share =
        100.0 * static_cast<double>(character->word_count) / static_cast<double>(play_words);
    row.ngram_vocab_size =
        static_cast<int64_t>(NgramSample::from_utterances(character->utterances).vocab_size());
    row.distinctiveness = estimate->second.median;
    row.d_ci_low = estimate->second.ci_low;
    row.d_ci_high = estimate->second.ci_high;
    row.baseline = estimate->second.baseline_median;
    row.baseline_ci_low = estimate->second.baseline_ci_low;
    row.baseline_ci_high = estimate->second.baseline_ci_high;
    row.keyness_auc = profile->second.auc;
    row.year_composed = play->year_composed;
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const AnalysisRow& a, const AnalysisRow& b) {
    return std::tie(a.corpus_id, a.play_id, a.character_id) <
           std::tie(b.corpus_id, b.play_id, b.character_id);
  });
  return rows;
}

CorpusSummary corpus_summary(std::span<const AnalysisRow> rows,
                             std::span<const PlayDocument> plays,
                             const std::string& corpus_id) {
  CorpusSummary summary;
  summary.corpus_id = corpus_id;
  std::unordered_map<std::string, const PlayDocument*> by_id;
  for (const auto& play : plays) {
    if (play.corpus_id != corpus_id) continue;
    summary.total_characters += static_cast<int64_t>(play.characters.size());
    by_id.emplace(play.play_id, &play);
  }
  std::set<std::string> grams;
  std::set<std::string> words;
  for (const auto& row : rows) {
    if (row.corpus_id != corpus_id) continue;
    ++summary.characters_analysed;
    const auto play = by_id.find(row.play_id);
    if (play == by_id.end())
      throw std::runtime_error("corpus_summary: unknown play " + row.play_id);
    const CharacterSpeech* character = play->second->find_character(row.character_id);
    if (!character)
      throw std::runtime_error("corpus_summary: unknown character " + row.character_id);
    const NgramSample sample = NgramSample::from_utterances(character->utterances);
    summary.total_3grams += sample.total();
    for (const auto& [gram, count] : sample.items()) grams.insert(gram);
    for (const auto& utterance : character->utterances)
      for (auto& word : word_tokens(utterance).words) words.insert(std::move(word));
    summary.total_words += character->word_count;
  }
  summary.unique_3grams = static_cast<int64_t>(grams.size());
  summary.unique_words = static_cast<int64_t>(words.size());
  return summary;
}

std::string rows_to_csv(std::span<const AnalysisRow> rows, FloatPrecision precision) {
  std::string out = csv::join_row(kRowHeader);
  for (const auto& row : rows) out += csv::join_row(row_fields(row, precision));
  return out;
}

void export_rows_csv(std::span<const AnalysisRow> rows, const std::filesystem::path& path,
                     FloatPrecision precision) {
  csv::write_file_atomic(path, rows_to_csv(rows, precision));
}

std::vector<AnalysisRow> rows_from_csv(const std::string& text) {
  const auto parsed = csv::parse(text);
  if (parsed.empty()) throw std::runtime_error("rows_from_csv: missing header");
  if (parsed.front() != kRowHeader)
    throw std::runtime_error("rows_from_csv: unexpected header");
  std::vector<AnalysisRow> rows;
  rows.reserve(parsed.size() - 1);
  for (size_t i = 1; i < parsed.size(); ++i) {
    const auto& f = parsed[i];
    if (f.size() != kRowHeader.size())
      throw std::runtime_error("rows_from_csv: wrong field count in data row");
    AnalysisRow row;
    row.corpus_id = f[0];
    row.play_id = f[1];
    row.character_id = f[2];
    row.gender = gender_from_string(f[3]);
    row.word_count = std::stoll(f[4]);
    row.dialogue_share = std::stod(f[5]);
    row.ngram_vocab_size = std::stoll(f[6]);
    row.distinctiveness = std::stod(f[7]);
    row.d_ci_low = std::stod(f[8]);
    row.d_ci_high = std::stod(f[9]);
    row.baseline = std::stod(f[10]);
    row.baseline_ci_low = std::stod(f[11]);
    row.baseline_ci_high = std::stod(f[12]);
    row.keyness_auc = std::stod(f[13]);
    if (!f[14].empty()) row.year_composed = std::stoi(f[14]);
    rows.push_back(std::move(row));
  }
  return rows;
}

void export_rows_jsonl(std::span<const AnalysisRow> rows, const std::filesystem::path& path,
                       FloatPrecision precision) {
  std::string out;
  for (const auto& row : rows) {
    nlohmann::ordered_json j;
    j["corpus_id"] = row.corpus_id;
    j["play_id"] = row.play_id;
    j["character_id"] = row.character_id;
    j["gender"] = to_string(row.gender);
    j["word_count"] = row.word_count;
    if (precision == FloatPrecision::full) {
      j["dialogue_share"] = row.dialogue_share;
      j["distinctiveness"] = row.distinctiveness;
      j["d_ci_low"] = row.d_ci_low;
      j["d_ci_high"] = row.d_ci_high;
      j["baseline"] = row.baseline;
      j["baseline_ci_low"] = row.baseline_ci_low;
      j["baseline_ci_high"] = row.baseline_ci_high;
      j["keyness_auc"] = row.keyness_auc;
    } else {
      j["dialogue_share"] = std::stod(csv::format_g6(row.dialogue_share));
      j["distinctiveness"] = std::stod(csv::format_g6(row.distinctiveness));
      j["d_ci_low"] = std::stod(csv::format_g6(row.d_ci_low));
      j["d_ci_high"] = std::stod(csv::format_g6(row.d_ci_high));
      j["baseline"] = std::stod(csv::format_g6(row.baseline));
      j["baseline_ci_low"] = std::stod(csv::format_g6(row.baseline_ci_low));
      j["baseline_ci_high"] = std::stod(csv::format_g6(row.baseline_ci_high));
      j["keyness_auc"] = std::stod(csv::format_g6(row.keyness_auc));
    }
    j["ngram_vocab_size"] = row.ngram_vocab_size;
    if (row.year_composed)
      j["year_composed"] = *row.year_composed;
    else
      j["year_composed"] = nullptr;
    out += j.dump();
    out += '\n';
  }
  csv::write_file_atomic(path, out);
}

std::string summaries_to_csv(std::span<const CorpusSummary> summaries) {
  std::string out = csv::join_row({"corpus_id", "total_characters", "characters_analysed",
                                   "unique_3grams", "unique_words", "total_3grams",
                                   "total_words"});
  for (const auto& s : summaries)
    out += csv::join_row({s.corpus_id, std::to_string(s.total_characters),
                          std::to_string(s.characters_analysed), std::to_string(s.unique_3grams),
                          std::to_string(s.unique_words), std::to_string(s.total_3grams),
                          std::to_string(s.total_words)});
  return out;
}

std::vector<std::pair<double, double>> binned_median_trend(
    std::vector<std::pair<double, double>> points, int bins) {
  std::vector<std::pair<double, double>> trend;
  if (points.empty() || bins <= 0) return trend;
  std::sort(points.begin(), points.end());
  const size_t n = points.size();
  const size_t k = std::min<size_t>(static_cast<size_t>(bins), n);
  trend.reserve(k);
  for (size_t b = 0; b < k; ++b) {
    const size_t begin = b * n / k;
    const size_t end = (b + 1) * n / k;
    if (begin >= end) continue;
    std::vector<double> xs, ys;
    xs.reserve(end - begin);
    ys.reserve(end - begin);
    for (size_t i = begin; i < end; ++i) {
      xs.push_back(points[i].first);
      ys.push_back(points[i].second);
    }
    trend.emplace_back(median(xs), median(ys));
  }
  return trend;
}

namespace {

struct GenderSplit {
  std::vector<const AnalysisRow*> rows[3];

  static size_t slot(Gender g) {
    switch (g) {
      case Gender::female: return 0;
      case Gender::male: return 1;
      default: return 2;
    }
  }
};

const char* kGenderNames[3] = {"female", "male", "unknown"};

std::string scatter_csv(std::span<const AnalysisRow*const> rows, bool year_axis) {
  std::string out = csv::join_row(
      {year_axis ? "year" : "dialogue_share", "distinctiveness", "gender", "play_id",
       "character_id"});
  for (const AnalysisRow* row : rows) {
    const double x = year_axis ? static_cast<double>(*row->year_composed) : row->dialogue_share;
    out += csv::join_row({csv::format_g6(x), csv::format_g6(row->distinctiveness),
                          to_string(row->gender), row->play_id, row->character_id});
  }
  return out;
}

std::string trend_csv(const std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>&
                          series_list,
                      std::string_view x_name) {
  std::string out = csv::join_row({"series", std::string(x_name), "median_distinctiveness"});
  for (const auto& [series, points] : series_list)
    for (const auto& [x, y] : points)
      out += csv::join_row({series, csv::format_g6(x), csv::format_g6(y)});
  return out;
}

}  // namespace

nlohmann::ordered_json emit_plot_data(std::span<const AnalysisRow> rows,
                                      const std::filesystem::path& out_dir,
                                      const nlohmann::ordered_json& metadata) {
  std::vector<std::string> corpora;
  for (const auto& row : rows)
    if (std::find(corpora.begin(), corpora.end(), row.corpus_id) == corpora.end())
      corpora.push_back(row.corpus_id);
  std::sort(corpora.begin(), corpora.end());

  nlohmann::ordered_json manifest;
  manifest["metadata"] = metadata;
  auto files = nlohmann::ordered_json::array();

  auto emit = [&](const std::string& name, const std::string& content) {
    csv::write_file_atomic(out_dir / name, content);
    files.push_back(name);
  };

  for (const auto& corpus : corpora) {
    GenderSplit split;
    std::vector<const AnalysisRow*> corpus_rows;
    for (const auto& row : rows) {
      if (row.corpus_id != corpus) continue;
      corpus_rows.push_back(&row);
      split.rows[GenderSplit::slot(row.gender)].push_back(&row);
    }

    // (a) distinctiveness vs dialogue share
    emit(corpus + "_dialogue_scatter.csv", scatter_csv(corpus_rows, false));
    {
      std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> series;
      for (size_t g = 0; g < 3; ++g) {
        if (split.rows[g].empty()) continue;
        std::vector<std::pair<double, double>> pts;
        for (const AnalysisRow* r : split.rows[g])
          pts.emplace_back(r->dialogue_share, r->distinctiveness);
        series.emplace_back(kGenderNames[g], binned_median_trend(std::move(pts)));
      }
      std::vector<std::pair<double, double>> baseline_pts;
      for (const AnalysisRow* r : corpus_rows)
        baseline_pts.emplace_back(r->dialogue_share, r->baseline);
      series.emplace_back("baseline", binned_median_trend(std::move(baseline_pts)));
      emit(corpus + "_dialogue_trend.csv", trend_csv(series, "dialogue_share"));
    }

    // (b) distinctiveness vs year; rows without a year drop out here only
    {
      std::vector<const AnalysisRow*> dated;
      for (const AnalysisRow* r : corpus_rows)
        if (r->year_composed) dated.push_back(r);
      emit(corpus + "_year_scatter.csv", scatter_csv(dated, true));
      std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> series;
      for (size_t g = 0; g < 3; ++g) {
        std::vector<std::pair<double, double>> pts;
        for (const AnalysisRow* r : split.rows[g])
          if (r->year_composed)
            pts.emplace_back(static_cast<double>(*r->year_composed), r->distinctiveness);
        if (pts.empty()) continue;
        series.emplace_back(kGenderNames[g], binned_median_trend(std::move(pts)));
      }
      std::vector<std::pair<double, double>> baseline_pts;
      for (const AnalysisRow* r : dated)
        baseline_pts.emplace_back(static_cast<double>(*r->year_composed), r->baseline);
      if (!baseline_pts.empty())
        series.emplace_back("baseline", binned_median_trend(std::move(baseline_pts)));
      emit(corpus + "_year_trend.csv", trend_csv(series, "year"));
    }

    // (c) per-gender distribution summaries
    {
      std::string out = csv::join_row({"feature", "gender", "n", "median", "q1", "q3",
                                       "upper_fence", "outliers_above"});
      const char* features[3] = {"dialogue_share", "distinctiveness", "ngram_vocab_size"};
      for (int f = 0; f < 3; ++f) {
        for (size_t g = 0; g < 3; ++g) {
          if (split.rows[g].empty()) continue;
          std::vector<double> values;
          values.reserve(split.rows[g].size());
          for (const AnalysisRow* r : split.rows[g]) {
            switch (f) {
              case 0: values.push_back(r->dialogue_share); break;
              case 1: values.push_back(r->distinctiveness); break;
              default: values.push_back(static_cast<double>(r->ngram_vocab_size)); break;
            }
          }
          const double q1 = quantile_of(values, 0.25);
          const double q2 = quantile_of(values, 0.5);
          const double q3 = quantile_of(values, 0.75);
          const double fence = q3 + 2.0 * (q3 - q1);
          int64_t outliers = 0;
          for (double v : values)
            if (v > fence) ++outliers;
          out += csv::join_row({features[f], kGenderNames[g], std::to_string(values.size()),
                                csv::format_g6(q2), csv::format_g6(q1), csv::format_g6(q3),
                                csv::format_g6(fence), std::to_string(outliers)});
        }
      }
      emit(corpus + "_gender_summary.csv", out);
    }
  }

  manifest["files"] = std::move(files);
  csv::write_file_atomic(out_dir / "plots_manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

ModelMatrixStats export_model_matrix(std::span<const AnalysisRow> rows,
                                     const std::filesystem::path& path) {
  ModelMatrixStats stats;
  std::string out = csv::join_row({"log_D", "G", "T", "S", "S2", "P"});
  for (const auto& row : rows) {
    if (row.gender == Gender::unknown) {
      ++stats.dropped_unknown_gender;
      continue;
    }
    if (row.distinctiveness <= 0.0) {
      ++stats.dropped_zero_distinctiveness;
      continue;
    }
    const double s = row.dialogue_share;
    out += csv::join_row({csv::format_exact(std::log(row.distinctiveness)),
                          to_string(row.gender), row.corpus_id, csv::format_exact(s),
                          csv::format_exact(s * s), row.play_id});
    ++stats.rows_written;
  }
  csv::write_file_atomic(path, out);
  return stats;
}

std::string contrast_table_to_csv(const ContrastTable& table) {
  const std::string name_a = to_string(table.side_a);
  const std::string name_b = to_string(table.side_b);
  std::string out = csv::join_row(
      {"rank", name_a + "_word", name_a + "_z", name_b + "_word", name_b + "_z"});
  const size_t n = std::max(table.words_a.size(), table.words_b.size());
  for (size_t i = 0; i < n; ++i) {
    std::string wa, za, wb, zb;
    if (i < table.words_a.size()) {
      wa = table.words_a[i].first;
      za = csv::format_g6(table.words_a[i].second);
    }
    if (i < table.words_b.size()) {
      wb = table.words_b[i].first;
      zb = csv::format_g6(table.words_b[i].second);
    }
    out += csv::join_row({std::to_string(i + 1), wa, za, wb, zb});
  }
  return out;
}

std::string contrast_table_to_text(const ContrastTable& table) {
  const std::string name_a = to_string(table.side_a);
  const std::string name_b = to_string(table.side_b);
  size_t width_a = name_a.size();
  for (const auto& [word, z] : table.words_a) width_a = std::max(width_a, utf8_length(word));
  std::ostringstream out;
  auto pad = [](const std::string& s, size_t width) {
    const size_t len = utf8_length(s);
    return s + std::string(width > len ? width - len : 0, ' ');
  };
  out << pad(name_a, width_a) << "  " << name_b << "\n";
  out << std::string(width_a, '-') << "  " << std::string(name_b.size(), '-') << "\n";
  const size_t n = std::max(table.words_a.size(), table.words_b.size());
  for (size_t i = 0; i < n; ++i) {
    const std::string wa = i < table.words_a.size() ? table.words_a[i].first : "";
    const std::string wb = i < table.words_b.size() ? table.words_b[i].first : "";
    out << pad(wa, width_a) << "  " << wb << "\n";
  }
  return out.str();
}

}  // namespace dramatis
