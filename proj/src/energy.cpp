#include "dramatis/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "dramatis/rng.hpp"
#include "dramatis/stats.hpp"

namespace dramatis {

const char* to_string(DistanceForm form) {
  return form == DistanceForm::root ? "root" : "squared";
}

DistanceForm distance_form_from_string(const std::string& name) {
  if (name == "root") return DistanceForm::root;
  if (name == "squared") return DistanceForm::squared;
  throw std::invalid_argument("unknown distance form: " + name);
}

std::vector<std::string> union_support(const NgramSample& a, const NgramSample& b) {
  std::vector<std::string> support;
  support.reserve(a.vocab_size() + b.vocab_size());
  auto ia = a.items().begin();
  auto ib = b.items().begin();
  while (ia != a.items().end() || ib != b.items().end()) {
    if (ib == b.items().end() || (ia != a.items().end() && ia->first < ib->first)) {
      support.push_back((ia++)->first);
    } else if (ia == a.items().end() || ib->first < ia->first) {
      support.push_back((ib++)->first);
    } else {
      support.push_back(ia->first);
      ++ia;
      ++ib;
    }
  }
  return support;
}

ProbabilityVector make_probability_vector(const NgramSample& sample,
                                          const std::vector<std::string>& support) {
  if (sample.total() <= 0)
    throw std::invalid_argument("make_probability_vector: empty sample");
  ProbabilityVector pv;
  pv.support = support;
  pv.probs.assign(support.size(), 0.0);
  const double total = static_cast<double>(sample.total());
  auto it = sample.items().begin();
  for (size_t i = 0; i < support.size() && it != sample.items().end(); ++i) {
    if (it->first == support[i]) {
      pv.probs[i] = static_cast<double>(it->second) / total;
      ++it;
    }
  }
  if (it != sample.items().end())
    throw std::invalid_argument("make_probability_vector: support does not cover sample");
  return pv;
}

double energy_distance(const ProbabilityVector& p, const ProbabilityVector& q) {
  if (p.support != q.support)
    throw std::invalid_argument("energy_distance: mismatched supports");
  double sum = 0.0;
  for (size_t i = 0; i < p.probs.size(); ++i) {
    const double d = p.probs[i] - q.probs[i];
    sum += d * d;
  }
  return sum;
}

double pairwise_energy_statistic(const NgramSample& x, const NgramSample& y) {
  if (x.empty() || y.empty())
    throw std::invalid_argument("pairwise_energy_statistic: empty sample");
  const double nx = static_cast<double>(x.total());
  const double ny = static_cast<double>(y.total());
  // E d(A,B) = sum over pairs of p_a p_b [a != b], evaluated literally.
  auto expected_distance = [](const NgramSample& a, const NgramSample& b, double na,
                              double nb) {
    double e = 0.0;
    for (const auto& [ga, ca] : a.items()) {
      const double pa = static_cast<double>(ca) / na;
      for (const auto& [gb, cb] : b.items()) {
        if (ga == gb) continue;
        e += pa * static_cast<double>(cb) / nb;
      }
    }
    return e;
  };
  const double cross = expected_distance(x, y, nx, ny);
  const double within_x = expected_distance(x, x, nx, nx);
  const double within_y = expected_distance(y, y, ny, ny);
  return 2.0 * cross - within_x - within_y;
}

void BootstrapConfig::validate() const {
  if (diagnostic_no_resample) {
    if (replicates < 1)
      throw std::invalid_argument("bootstrap: replicates must be >= 1 in diagnostic mode");
  } else if (replicates < 2) {
    throw std::invalid_argument(
        "bootstrap: replicates must be >= 2 to form a confidence interval");
  }
  if (ci_level <= 0.0 || ci_level >= 1.0)
    throw std::invalid_argument("bootstrap: ci_level must lie strictly between 0 and 1");
  if (resample_size < 0)
    throw std::invalid_argument("bootstrap: resample_size must be >= 0");
  if (threads < 0) throw std::invalid_argument("bootstrap: threads must be >= 0");
}

namespace {

struct IndexedCounts {
  std::vector<int64_t> counts;
  int64_t total = 0;
};

IndexedCounts project_counts(const NgramSample& sample,
                             const std::vector<std::string>& support) {
  IndexedCounts out;
  out.counts.assign(support.size(), 0);
  auto it = sample.items().begin();
  for (size_t i = 0; i < support.size() && it != sample.items().end(); ++i) {
    if (it->first == support[i]) {
      out.counts[i] = it->second;
      ++it;
    }
  }
  out.total = sample.total();
  return out;
}

double squared_energy_from_counts(std::span<const int64_t> a, double na,
                                  std::span<const int64_t> b, double nb) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) / na - static_cast<double>(b[i]) / nb;
    sum += d * d;
  }
  return sum;
}

// Runs `replicates` independent evaluations; replicate b always uses the
// stream derived from (seed, stream_tag, b) so thread count cannot change
// the result.
std::vector<double> run_replicates(const IndexedCounts& x, const IndexedCounts& y,
                                   int64_t resample_size, const BootstrapConfig& cfg,
                                   uint64_t stream_tag) {
  std::vector<double> values(static_cast<size_t>(cfg.replicates), 0.0);
  auto worker = [&](int begin, int end) {
    for (int b = begin; b < end; ++b) {
      if (cfg.diagnostic_no_resample) {
        values[static_cast<size_t>(b)] =
            squared_energy_from_counts(x.counts, static_cast<double>(x.total), y.counts,
                                       static_cast<double>(y.total));
        continue;
      }
      Xoshiro256ss rng(derive_seed(cfg.seed ^ stream_tag, static_cast<uint64_t>(b)));
      const auto kx = sample_multinomial(rng, resample_size, x.counts);
      const auto ky = sample_multinomial(rng, resample_size, y.counts);
      values[static_cast<size_t>(b)] =
          squared_energy_from_counts(kx, static_cast<double>(resample_size), ky,
                                     static_cast<double>(resample_size));
    }
  };
  int threads = cfg.threads;
  if (threads == 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 1 || cfg.replicates < 4) {
    worker(0, cfg.replicates);
  } else {
    threads = std::min(threads, cfg.replicates);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    const int chunk = (cfg.replicates + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const int begin = t * chunk;
      const int end = std::min(cfg.replicates, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  return values;
}

struct Summary {
  double median, lo, hi;
};

Summary summarize(std::vector<double>& values, double ci_level) {
  std::vector<double> sorted(values);
  std::sort(sorted.begin(), sorted.end());
  const double alpha = 1.0 - ci_level;
  return {quantile_sorted(sorted, 0.5), quantile_sorted(sorted, alpha / 2.0),
          quantile_sorted(sorted, 1.0 - alpha / 2.0)};
}

void apply_form(std::vector<double>& values, DistanceForm form) {
  if (form == DistanceForm::root)
    for (auto& v : values) v = std::sqrt(v);
}

constexpr uint64_t kDistinctivenessTag = 0x64697374ULL;
constexpr uint64_t kBaselineTag = 0x62617365ULL;

}  // namespace

BaselineEstimate baseline_distinctiveness(const NgramSample& character,
                                          const BootstrapConfig& config) {
  config.validate();
  if (character.total() <= 0)
    throw std::invalid_argument("baseline_distinctiveness: empty sample");
  std::vector<std::string> support;
  support.reserve(character.vocab_size());
  for (const auto& [gram, count] : character.items()) support.push_back(gram);
  const IndexedCounts counts = project_counts(character, support);
  const int64_t n = config.resample_size > 0 ? config.resample_size : character.total();
  auto values = run_replicates(counts, counts, n, config, kBaselineTag);
  std::vector<double> squared = values;
  apply_form(values, config.form);
  const Summary s = summarize(values, config.ci_level);
  return {s.median, s.lo, s.hi, std::move(values), std::move(squared)};
}

DistinctivenessEstimate bootstrap_distinctiveness(const NgramSample& character,
                                                  const NgramSample& others,
                                                  const BootstrapConfig& config) {
  config.validate();
  if (character.total() <= 0)
    throw std::invalid_argument("bootstrap_distinctiveness: empty character sample");
  if (others.total() <= 0)
    throw std::invalid_argument("bootstrap_distinctiveness: empty others sample");

  const auto support = union_support(character, others);
  const IndexedCounts cx = project_counts(character, support);
  const IndexedCounts cy = project_counts(others, support);
  const int64_t n = config.resample_size > 0 ? config.resample_size : character.total();

  auto values = run_replicates(cx, cy, n, config, kDistinctivenessTag);
  std::vector<double> squared = values;
  apply_form(values, config.form);
  const Summary s = summarize(values, config.ci_level);

  DistinctivenessEstimate estimate;
  estimate.form = config.form;
  estimate.median = s.median;
  estimate.ci_low = s.lo;
  estimate.ci_high = s.hi;
  estimate.replicates = std::move(values);
  estimate.replicates_squared = std::move(squared);

  BaselineEstimate baseline = baseline_distinctiveness(character, config);
  estimate.baseline_median = baseline.median;
  estimate.baseline_ci_low = baseline.ci_low;
  estimate.baseline_ci_high = baseline.ci_high;
  estimate.baseline_replicates = std::move(baseline.replicates);
  estimate.baseline_replicates_squared = std::move(baseline.replicates_squared);
  return estimate;
}

}  // namespace dramatis
