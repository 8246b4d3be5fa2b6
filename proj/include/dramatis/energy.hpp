#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dramatis/text.hpp"

namespace dramatis {

enum class DistanceForm { root, squared };

const char* to_string(DistanceForm form);
DistanceForm distance_form_from_string(const std::string& name);

// Categorical distribution on an explicit, ordered support.
struct ProbabilityVector {
  std::vector<std::string> support;
  std::vector<double> probs;
};

// Sorted union of two samples' vocabularies.
std::vector<std::string> union_support(const NgramSample& a, const NgramSample& b);

// Empirical distribution of `sample` projected onto `support` (which must
// cover the sample's vocabulary).
ProbabilityVector make_probability_vector(const NgramSample& sample,
                                          const std::vector<std::string>& support);

// Energy distance between two categorical distributions under the discrete
// metric d(x,y) = 1{x != y}; closed form sum_x (p_x - q_x)^2. Requires a
// shared support ordering. Symmetric, zero iff p == q, at most 2.
double energy_distance(const ProbabilityVector& p, const ProbabilityVector& q);

// The same statistic evaluated from the general two-sample definition
// 2 E d(X,Y) - E d(X,X') - E d(Y,Y') with exact expectations over the
// empirical distributions (a deliberately independent O(V^2) route used to
// cross-check the closed form).
double pairwise_energy_statistic(const NgramSample& x, const NgramSample& y);

struct BootstrapConfig {
  int replicates = 1000;
  uint64_t seed = 0;
  // 0 selects the examined sample's own gram count ("character size");
  // a positive value fixes the resample size on both sides.
  int64_t resample_size = 0;
  double ci_level = 0.95;
  DistanceForm form = DistanceForm::root;
  // Diagnostic: skip resampling and evaluate the full empirical
  // distributions in every replicate (allows replicates == 1).
  bool diagnostic_no_resample = false;
  // Worker threads for replicate evaluation; results are identical to the
  // serial order because every replicate derives its own substream seed.
  int threads = 1;

  void validate() const;  // throws std::invalid_argument
};

struct BaselineEstimate {
  double median = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::vector<double> replicates;          // in the configured form's scale
  std::vector<double> replicates_squared;  // always the squared form
};

struct DistinctivenessEstimate {
  double median = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double baseline_median = 0.0;
  double baseline_ci_low = 0.0;
  double baseline_ci_high = 0.0;
  DistanceForm form = DistanceForm::root;
  // Replicate values are kept in both scales: the configured output form
  // and the raw squared statistic (sqrt does not round-trip exactly).
  std::vector<double> replicates;
  std::vector<double> replicates_squared;
  std::vector<double> baseline_replicates;
  std::vector<double> baseline_replicates_squared;
};

// Per replicate, resamples `resample_size` grams with replacement from each
// side, forms empirical distributions on the union support and records their
// energy distance. Median and percentile interval over replicates; the
// baseline fields come from baseline_distinctiveness with the same config.
// Deterministic for a fixed seed, independent of thread count.
DistinctivenessEstimate bootstrap_distinctiveness(const NgramSample& character,
                                                  const NgramSample& others,
                                                  const BootstrapConfig& config);

// Distance between two independent resamples of the character itself: the
// sampling-noise floor of the statistic.
BaselineEstimate baseline_distinctiveness(const NgramSample& character,
                                          const BootstrapConfig& config);

}  // namespace dramatis
