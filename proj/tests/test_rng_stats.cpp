#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "dramatis/rng.hpp"
#include "dramatis/stats.hpp"

using namespace dramatis;

TEST_CASE("xoshiro sequences are seed-deterministic") {
  Xoshiro256ss a(123), b(123), c(124);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 100; ++i) {
    const uint64_t va = a.next();
    if (va != b.next()) all_equal = false;
    if (va != c.next()) any_diff = true;
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("uniform stays in [0,1) and covers the range") {
  Xoshiro256ss rng(7);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
}

TEST_CASE("derive_seed separates streams") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(1, 5) == derive_seed(1, 5));
}

TEST_CASE("binomial edge cases") {
  Xoshiro256ss rng(1);
  CHECK(sample_binomial(rng, 0, 0.5) == 0);
  CHECK(sample_binomial(rng, 100, 0.0) == 0);
  CHECK(sample_binomial(rng, 100, 1.0) == 100);
  for (int i = 0; i < 100; ++i) {
    const int64_t k = sample_binomial(rng, 5, 0.5);
    CHECK(k >= 0);
    CHECK(k <= 5);
  }
}

TEST_CASE("binomial matches exact moments for large n") {
  Xoshiro256ss rng(42);
  const int64_t n = 1000;
  const double p = 0.3;
  const int draws = 20000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double k = static_cast<double>(sample_binomial(rng, n, p));
    sum += k;
    sum2 += k * k;
  }
  const double mean = sum / draws;
  const double var = sum2 / draws - mean * mean;
  const double expected_mean = static_cast<double>(n) * p;
  const double expected_var = static_cast<double>(n) * p * (1 - p);
  // 5-sigma band on the sample mean.
  CHECK(std::abs(mean - expected_mean) < 5.0 * std::sqrt(expected_var / draws));
  CHECK(std::abs(var - expected_var) / expected_var < 0.1);
}

TEST_CASE("binomial matches the exact cdf at spot points") {
  // Exact reference via the pmf recurrence.
  const int64_t n = 100;
  const double p = 0.37;
  std::vector<double> pmf(static_cast<size_t>(n) + 1);
  pmf[0] = std::pow(1 - p, static_cast<double>(n));
  for (int64_t k = 0; k < n; ++k)
    pmf[static_cast<size_t>(k) + 1] = pmf[static_cast<size_t>(k)] *
                                      static_cast<double>(n - k) / static_cast<double>(k + 1) *
                                      (p / (1 - p));
  auto cdf = [&](int64_t k) {
    double c = 0.0;
    for (int64_t i = 0; i <= k; ++i) c += pmf[static_cast<size_t>(i)];
    return c;
  };
  Xoshiro256ss rng(99);
  const int draws = 40000;
  int below30 = 0, below37 = 0, below45 = 0;
  for (int i = 0; i < draws; ++i) {
    const int64_t k = sample_binomial(rng, n, p);
    below30 += k <= 30 ? 1 : 0;
    below37 += k <= 37 ? 1 : 0;
    below45 += k <= 45 ? 1 : 0;
  }
  const double tol = 4.0 / std::sqrt(static_cast<double>(draws));  // ~4 sigma
  CHECK(std::abs(below30 / double(draws) - cdf(30)) < tol);
  CHECK(std::abs(below37 / double(draws) - cdf(37)) < tol);
  CHECK(std::abs(below45 / double(draws) - cdf(45)) < tol);
}

TEST_CASE("multinomial conserves draws and respects zero weights") {
  Xoshiro256ss rng(5);
  const std::vector<int64_t> weights = {3, 0, 5, 2, 0, 10};
  for (int i = 0; i < 50; ++i) {
    const auto counts = sample_multinomial(rng, 1000, weights);
    CHECK(std::accumulate(counts.begin(), counts.end(), int64_t{0}) == 1000);
    CHECK(counts[1] == 0);
    CHECK(counts[4] == 0);
  }
}

TEST_CASE("multinomial proportions follow the weights") {
  Xoshiro256ss rng(11);
  const std::vector<int64_t> weights = {1, 2, 3};
  const int64_t draws = 600000;
  const auto counts = sample_multinomial(rng, draws, weights);
  CHECK(std::abs(counts[0] / double(draws) - 1.0 / 6) < 0.005);
  CHECK(std::abs(counts[1] / double(draws) - 2.0 / 6) < 0.005);
  CHECK(std::abs(counts[2] / double(draws) - 3.0 / 6) < 0.005);
}

TEST_CASE("multinomial rejects empty weights") {
  Xoshiro256ss rng(1);
  const std::vector<int64_t> zeros = {0, 0};
  CHECK_THROWS_AS(sample_multinomial(rng, 10, zeros), std::invalid_argument);
}

TEST_CASE("quantile interpolates order statistics") {
  const std::vector<double> v = {1, 2, 3, 4};
  CHECK(quantile_sorted(v, 0.0) == doctest::Approx(1.0));
  CHECK(quantile_sorted(v, 1.0) == doctest::Approx(4.0));
  CHECK(quantile_sorted(v, 0.5) == doctest::Approx(2.5));
  CHECK(quantile_sorted(v, 0.25) == doctest::Approx(1.75));
  const std::vector<double> single = {7.0};
  CHECK(quantile_sorted(single, 0.9) == doctest::Approx(7.0));
}

TEST_CASE("median handles odd and even sizes") {
  const std::vector<double> odd = {5, 1, 3};
  const std::vector<double> even = {4, 1, 3, 2};
  CHECK(median(odd) == doctest::Approx(3.0));
  CHECK(median(even) == doctest::Approx(2.5));
}

TEST_CASE("average ranks share ties") {
  const std::vector<double> v = {10, 20, 20, 30};
  const auto r = average_ranks(v);
  CHECK(r[0] == doctest::Approx(1.0));
  CHECK(r[1] == doctest::Approx(2.5));
  CHECK(r[2] == doctest::Approx(2.5));
  CHECK(r[3] == doctest::Approx(4.0));
}

TEST_CASE("spearman endpoints and ties") {
  const std::vector<double> x = {1, 2, 3, 4, 5};
  const std::vector<double> up = {10, 20, 30, 40, 50};
  const std::vector<double> down = {5, 4, 3, 2, 1};
  CHECK(spearman_rho(x, up) == doctest::Approx(1.0));
  CHECK(spearman_rho(x, down) == doctest::Approx(-1.0));
  const std::vector<double> tx = {1, 1, 2};
  const std::vector<double> ty = {3, 3, 5};
  CHECK(spearman_rho(tx, ty) == doctest::Approx(1.0));
  CHECK_THROWS_AS(spearman_rho(tx, std::vector<double>{1, 1, 1}), std::invalid_argument);
}
