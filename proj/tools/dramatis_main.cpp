// dramatis: character-distinctiveness statistics for drama corpora.
//
// Subcommands:
//   fetch     populate the local cache from a DraCor-style API
//   analyze   per-character distinctiveness tables, plot data, model matrix
//   contrast  relatively-more-frequent word tables for a gender pair
//   simulate  run the pipeline on a generated play with known ground truth

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "dramatis/csv.hpp"
#include "dramatis/rng.hpp"
#include "dramatis/dracor.hpp"
#include "dramatis/pipeline.hpp"
#include "dramatis/stats.hpp"
#include "dramatis/synthetic.hpp"

namespace fs = std::filesystem;
using namespace dramatis;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIngestion = 2;
constexpr int kExitAnalysis = 3;

struct RunConfig {
  std::vector<std::string> corpora;
  std::string source = "remote";
  std::string base_url = "https://dracor.org/api/v1";
  std::string local_root;
  std::string cache_dir = "cache";
  std::string output_dir = "out";
  bool offline = false;
  int64_t min_words = kDefaultMinWords;
  int replicates = 1000;
  uint64_t seed = 42;
  double ci_level = 0.95;
  std::string distance_form = "root";
  double prior_mass = kDefaultPriorMass;
  bool plots = true;
  bool model_matrix = true;
  bool full_precision = false;
  int threads = 0;
};

void add_corpus_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("-c,--corpus", cfg.corpora,
                  "Corpus id (repeatable), e.g. shake, fre, ger, rus")
      ->required();
  cmd->add_option("--source", cfg.source, "Corpus source: remote or local")
      ->check(CLI::IsMember({"remote", "local"}))
      ->capture_default_str();
  cmd->add_option("--base-url", cfg.base_url, "API base URL for remote corpora")
      ->capture_default_str();
  cmd->add_option("--local-root", cfg.local_root,
                  "Directory holding one subdirectory of TEI files per corpus");
  cmd->add_option("--cache-dir", cfg.cache_dir, "Cache directory for raw API payloads")
      ->envname("DRAMATIS_CACHE_DIR")
      ->capture_default_str();
  cmd->add_flag("--offline", cfg.offline, "Serve remote corpora from the cache only");
}

void add_analysis_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--min-words", cfg.min_words,
                  "Minimum spoken words for a character to be analysed")
      ->capture_default_str();
  cmd->add_option("-B,--replicates", cfg.replicates, "Bootstrap replicates")
      ->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "Master random seed")->capture_default_str();
  cmd->add_option("--ci-level", cfg.ci_level, "Confidence level for percentile intervals")
      ->capture_default_str();
  cmd->add_option("--distance-form", cfg.distance_form,
                  "Energy distance output form: root or squared")
      ->check(CLI::IsMember({"root", "squared"}))
      ->capture_default_str();
  cmd->add_option("--prior-mass", cfg.prior_mass,
                  "Total pseudo-count of the keyness Dirichlet prior (alpha0)")
      ->capture_default_str();
  cmd->add_option("--threads", cfg.threads, "Worker threads (0 = all hardware threads)")
      ->capture_default_str();
}

std::vector<CorpusDescriptor> descriptors(const RunConfig& cfg) {
  std::vector<CorpusDescriptor> out;
  for (const auto& corpus : cfg.corpora) {
    CorpusDescriptor d;
    d.corpus_id = corpus;
    if (cfg.source == "local") {
      d.source = CorpusDescriptor::Source::local_directory;
      d.base_locator = (fs::path(cfg.local_root) / corpus).string();
    } else {
      d.source = CorpusDescriptor::Source::remote_api;
      d.base_locator = cfg.base_url;
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<std::string> validate(const RunConfig& cfg) {
  std::vector<std::string> problems;
  if (cfg.min_words < 0) problems.push_back("--min-words must be >= 0");
  if (cfg.replicates < 2)
    problems.push_back("--replicates must be >= 2: a percentile confidence interval "
                       "needs at least two bootstrap replicates");
  if (cfg.ci_level <= 0.0 || cfg.ci_level >= 1.0)
    problems.push_back("--ci-level must lie strictly between 0 and 1");
  if (cfg.prior_mass <= 0.0) problems.push_back("--prior-mass must be > 0");
  if (cfg.threads < 0) problems.push_back("--threads must be >= 0");
  if (cfg.source == "local" && cfg.local_root.empty())
    problems.push_back("--local-root is required with --source local");
  return problems;
}

uint64_t config_hash(const nlohmann::ordered_json& j) { return fnv1a64(j.dump()); }

nlohmann::ordered_json run_metadata(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["tool"] = "dramatis";
  j["corpora"] = cfg.corpora;
  j["source"] = cfg.source;
  j["min_words"] = cfg.min_words;
  j["replicates"] = cfg.replicates;
  j["seed"] = cfg.seed;
  j["ci_level"] = cfg.ci_level;
  j["distance_form"] = cfg.distance_form;
  j["prior_mass"] = cfg.prior_mass;
  j["upsample_mode"] = "count-scaling";
  j["resample_size_policy"] = "character-size";
  j["ci_method"] = "percentile";
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(config_hash(j)));
  j["config_hash"] = hash;
  return j;
}

AnalysisConfig analysis_config(const RunConfig& cfg) {
  AnalysisConfig out;
  out.min_words = cfg.min_words;
  out.bootstrap.replicates = cfg.replicates;
  out.bootstrap.seed = cfg.seed;
  out.bootstrap.ci_level = cfg.ci_level;
  out.bootstrap.form = distance_form_from_string(cfg.distance_form);
  out.prior_mass = cfg.prior_mass;
  out.threads = cfg.threads;
  return out;
}

std::vector<PlayDocument> ingest(const RunConfig& cfg, IngestionReport& report) {
  FetchOptions options;
  options.cache_dir = cfg.cache_dir;
  options.offline = cfg.offline;
  std::vector<PlayDocument> plays;
  for (const auto& descriptor : descriptors(cfg)) {
    auto docs = fetch_corpus(descriptor, options, report);
    std::cerr << "ingested " << docs.size() << " plays from corpus '" << descriptor.corpus_id
              << "'\n";
    plays.insert(plays.end(), std::make_move_iterator(docs.begin()),
                 std::make_move_iterator(docs.end()));
  }
  return plays;
}

void write_metadata(const RunConfig& cfg, const fs::path& out_dir) {
  csv::write_file_atomic(out_dir / "metadata.json", run_metadata(cfg).dump(2) + "\n");
}

int cmd_fetch(const RunConfig& cfg) {
  IngestionReport report;
  std::vector<PlayDocument> plays;
  try {
    plays = ingest(cfg, report);
  } catch (const CorpusFetchError& e) {
    std::cerr << "ingestion error: " << e.what() << "\n";
    return kExitIngestion;
  }
  fs::create_directories(cfg.output_dir);
  report.write_jsonl(fs::path(cfg.output_dir) / "ingest_report.jsonl");
  int64_t characters = 0;
  for (const auto& play : plays) characters += static_cast<int64_t>(play.characters.size());
  std::cout << "plays: " << plays.size() << "\ncharacters: " << characters
            << "\nwarnings+errors: " << report.entries().size() << "\n";
  return report.error_count() == 0 || !plays.empty() ? kExitOk : kExitIngestion;
}

int analyze_and_export(const RunConfig& cfg, std::span<const PlayDocument> plays,
                       IngestionReport& report) {
  const fs::path out_dir(cfg.output_dir);
  const AnalysisOutput output = analyze_plays(plays, analysis_config(cfg), report);

  const FloatPrecision precision =
      cfg.full_precision ? FloatPrecision::full : FloatPrecision::six_significant;
  export_rows_csv(output.rows, out_dir / "rows.csv", precision);
  export_rows_jsonl(output.rows, out_dir / "rows.jsonl", FloatPrecision::full);
  csv::write_file_atomic(out_dir / "summary.csv", summaries_to_csv(output.summaries));
  if (cfg.plots) emit_plot_data(output.rows, out_dir, run_metadata(cfg));
  if (cfg.model_matrix) {
    const auto stats = export_model_matrix(output.rows, out_dir / "model_matrix.csv");
    if (stats.dropped_zero_distinctiveness > 0)
      std::cerr << "model matrix: dropped " << stats.dropped_zero_distinctiveness
                << " rows with zero distinctiveness (log undefined)\n";
  }
  write_metadata(cfg, out_dir);
  report.write_jsonl(out_dir / "ingest_report.jsonl");
  if (output.rows.empty())
    std::cerr << "note: no character met the " << cfg.min_words
              << "-word filter; outputs are empty (see --min-words)\n";
  std::cout << "rows: " << output.rows.size() << "\n";
  for (const auto& s : output.summaries)
    std::cout << s.corpus_id << ": " << s.characters_analysed << "/" << s.total_characters
              << " characters analysed, " << s.total_words << " words, " << s.total_3grams
              << " 3-grams\n";
  return kExitOk;
}

int cmd_analyze(const RunConfig& cfg) {
  IngestionReport report;
  std::vector<PlayDocument> plays;
  try {
    plays = ingest(cfg, report);
    if (plays.empty()) {
      std::cerr << "error: no plays ingested\n";
      report.write_jsonl(fs::path(cfg.output_dir) / "ingest_report.jsonl");
      return kExitIngestion;
    }
  } catch (const CorpusFetchError& e) {
    std::cerr << "ingestion error: " << e.what() << "\n";
    return kExitIngestion;
  }
  try {
    return analyze_and_export(cfg, plays, report);
  } catch (const std::exception& e) {
    std::cerr << "analysis error: " << e.what() << "\n";
    return kExitAnalysis;
  }
}

int cmd_contrast(const RunConfig& cfg, const std::string& gender_a,
                 const std::string& gender_b, int top_n) {
  IngestionReport report;
  std::vector<PlayDocument> plays;
  try {
    plays = ingest(cfg, report);
    if (plays.empty()) {
      std::cerr << "error: no plays ingested\n";
      return kExitIngestion;
    }
  } catch (const CorpusFetchError& e) {
    std::cerr << "ingestion error: " << e.what() << "\n";
    return kExitIngestion;
  }
  try {
    const fs::path out_dir(cfg.output_dir);
    for (const auto& corpus : cfg.corpora) {
      std::vector<PlayDocument> subset;
      for (const auto& play : plays)
        if (play.corpus_id == corpus) subset.push_back(play);
      const ContrastTable table =
          gender_contrast(subset, gender_from_string(gender_a), gender_from_string(gender_b),
                          cfg.prior_mass, top_n);
      csv::write_file_atomic(out_dir / (corpus + "_contrast.csv"),
                             contrast_table_to_csv(table));
      csv::write_file_atomic(out_dir / (corpus + "_contrast.txt"),
                             contrast_table_to_text(table));
      std::cout << "== " << corpus << " ==\n" << contrast_table_to_text(table);
    }
    write_metadata(cfg, cfg.output_dir);
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "analysis error: " << e.what() << "\n";
    return kExitAnalysis;
  }
}

int cmd_simulate(const RunConfig& cfg, const std::string& spec_path) {
  SyntheticSpec spec;
  try {
    std::ifstream in(spec_path);
    if (!in) throw std::runtime_error("cannot read spec file: " + spec_path);
    spec = SyntheticSpec::from_json(nlohmann::json::parse(in));
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    const std::vector<PlayDocument> plays = {generate_play(spec)};
    IngestionReport report;
    RunConfig run = cfg;
    if (run.min_words == kDefaultMinWords && spec.words_per_character < kDefaultMinWords)
      run.min_words = 0;
    const int code = analyze_and_export(run, plays, report);
    if (code != kExitOk) return code;

    // Ground-truth monotonicity report: epsilon vs both measures.
    const std::string csv_text = [&] {
      std::ifstream in(fs::path(run.output_dir) / "rows.csv", std::ios::binary);
      return std::string(std::istreambuf_iterator<char>(in),
                         std::istreambuf_iterator<char>());
    }();
    const auto rows = rows_from_csv(csv_text);
    std::vector<double> eps, dist, auc;
    for (size_t i = 0; i < rows.size() && i < spec.epsilons.size(); ++i) {
      // rows are sorted by character id, which follows generation order
      eps.push_back(spec.epsilons[i]);
      dist.push_back(rows[i].distinctiveness);
      auc.push_back(rows[i].keyness_auc);
    }
    if (eps.size() >= 2) {
      std::cout << "spearman(epsilon, distinctiveness) = " << spearman_rho(eps, dist) << "\n";
      std::cout << "spearman(epsilon, keyness_auc)     = " << spearman_rho(eps, auc) << "\n";
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "analysis error: " << e.what() << "\n";
    return kExitAnalysis;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Character distinctiveness statistics for drama corpora"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a TOML-style key/value file");

  RunConfig cfg;
  std::string gender_a = "female", gender_b = "male";
  int top_n = 40;
  std::string spec_path;

  CLI::App* fetch = app.add_subcommand("fetch", "Fetch corpora into the local cache");
  fetch->configurable();
  add_corpus_options(fetch, cfg);
  fetch->add_option("-o,--output-dir", cfg.output_dir, "Directory for the ingestion report")
      ->capture_default_str();

  CLI::App* analyze = app.add_subcommand("analyze", "Run the full distinctiveness analysis");
  analyze->configurable();
  add_corpus_options(analyze, cfg);
  add_analysis_options(analyze, cfg);
  analyze->add_option("-o,--output-dir", cfg.output_dir, "Directory for analysis outputs")
      ->capture_default_str();
  analyze->add_flag("--plots,!--no-plots", cfg.plots, "Emit plot-ready CSV bundles")
      ->capture_default_str();
  analyze
      ->add_flag("--model-matrix,!--no-model-matrix", cfg.model_matrix,
                 "Emit the regression model matrix (log_D,G,T,S,S2,P)")
      ->capture_default_str();
  analyze->add_flag("--full-precision", cfg.full_precision,
                    "Serialize CSV floats with full round-trip precision");

  CLI::App* contrast =
      app.add_subcommand("contrast", "Gender-contrast keyword tables per corpus");
  contrast->configurable();
  add_corpus_options(contrast, cfg);
  contrast->add_option("-o,--output-dir", cfg.output_dir, "Directory for contrast tables")
      ->capture_default_str();
  contrast->add_option("--gender-a", gender_a, "First gender")->capture_default_str();
  contrast->add_option("--gender-b", gender_b, "Second gender")->capture_default_str();
  contrast->add_option("--top", top_n, "Rows per side")->capture_default_str();
  contrast->add_option("--prior-mass", cfg.prior_mass,
                       "Total pseudo-count of the keyness Dirichlet prior (alpha0)")
      ->capture_default_str();

  CLI::App* simulate =
      app.add_subcommand("simulate", "Analyze a synthetic play with known ground truth");
  simulate->configurable();
  simulate->add_option("--spec", spec_path, "Synthetic play spec (JSON)")->required();
  simulate->add_option("-o,--output-dir", cfg.output_dir, "Directory for analysis outputs")
      ->capture_default_str();
  add_analysis_options(simulate, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (app.got_subcommand(simulate)) {
    const auto problems = validate(cfg);
    if (!problems.empty()) {
      std::cerr << "configuration errors:\n";
      for (const auto& p : problems) std::cerr << "  - " << p << "\n";
      return kExitConfig;
    }
    return cmd_simulate(cfg, spec_path);
  }

  const auto problems = validate(cfg);
  if (!problems.empty()) {
    std::cerr << "configuration errors:\n";
    for (const auto& p : problems) std::cerr << "  - " << p << "\n";
    return kExitConfig;
  }
  try {
    if (app.got_subcommand(fetch)) return cmd_fetch(cfg);
    if (app.got_subcommand(analyze)) return cmd_analyze(cfg);
    if (app.got_subcommand(contrast)) return cmd_contrast(cfg, gender_a, gender_b, top_n);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAnalysis;
  }
  return kExitConfig;
}
