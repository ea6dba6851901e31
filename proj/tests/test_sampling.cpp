#include "qfp/sampling.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "qfp/bitstring.hpp"
#include "qfp/decision.hpp"

using namespace qfp;

namespace {

struct MomentStats {
  double mean = 0;
  double var = 0;
};

MomentStats sample_moments(double lambda, std::uint64_t seed, int trials) {
  CounterRng rng(seed);
  double sum = 0;
  double sumsq = 0;
  for (int i = 0; i < trials; ++i) {
    const double x = static_cast<double>(poisson_sample(lambda, rng));
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / trials;
  return {mean, sumsq / trials - mean * mean};
}

}  // namespace

TEST_CASE("poisson sampler is deterministic and handles edges") {
  CounterRng a(42), b(42);
  for (int i = 0; i < 200; ++i)
    CHECK(poisson_sample(17.3, a) == poisson_sample(17.3, b));

  CounterRng rng(7);
  for (int i = 0; i < 100; ++i) CHECK(poisson_sample(0.0, rng) == 0);

  CHECK_THROWS_AS(poisson_sample(-1.0, rng), std::domain_error);
  CHECK_THROWS_AS(poisson_sample(std::nan(""), rng), std::domain_error);
  CHECK_THROWS_AS(
      poisson_sample(std::numeric_limits<double>::infinity(), rng),
      std::domain_error);
}

TEST_CASE("poisson sample moments match the distribution across regimes") {
  // Straddles the switch from sequential inversion to transformed rejection
  // at lambda = 30.  Five-sigma bands on mean and variance: mean variance is
  // lambda/N, sample-variance variance is (lambda + 2 lambda^2)/N.
  const int trials = 200000;
  std::uint64_t seed = 1000;
  for (double lambda : {0.5, 3.0, 12.0, 29.9, 30.1, 100.0, 650.0}) {
    CAPTURE(lambda);
    const MomentStats st = sample_moments(lambda, seed++, trials);
    const double mean_tol = 5.0 * std::sqrt(lambda / trials);
    const double var_tol =
        5.0 * std::sqrt((lambda + 2.0 * lambda * lambda) / trials);
    CHECK(std::fabs(st.mean - lambda) < mean_tol);
    CHECK(std::fabs(st.var - lambda) < var_tol);
  }
}

TEST_CASE("poisson sample distribution matches analytic tails") {
  // Empirical CDF against poisson_cdf, two independent evaluation routes.
  const int trials = 200000;
  for (double lambda : {5.0, 47.0}) {
    CAPTURE(lambda);
    CounterRng rng(2024);
    std::vector<std::int64_t> draws(trials);
    for (auto& d : draws) d = poisson_sample(lambda, rng);
    for (std::int64_t k :
         {static_cast<std::int64_t>(lambda * 0.6),
          static_cast<std::int64_t>(lambda), static_cast<std::int64_t>(
                                                 lambda * 1.4)}) {
      CAPTURE(k);
      int at_most = 0;
      for (auto d : draws) at_most += d <= k;
      const double want = poisson_cdf(k, lambda);
      const double tol =
          5.0 * std::sqrt(want * (1.0 - want) / trials) + 1e-9;
      CHECK(std::fabs(static_cast<double>(at_most) / trials - want) < tol);
    }
  }
}

TEST_CASE("bernoulli sampler") {
  CounterRng rng(5);
  for (int i = 0; i < 100; ++i) CHECK_FALSE(bernoulli_sample(0.0, rng));
  for (int i = 0; i < 100; ++i) CHECK(bernoulli_sample(1.0, rng));

  const int trials = 200000;
  const double p = 0.3;
  CounterRng rng2(99);
  int hits = 0;
  for (int i = 0; i < trials; ++i) hits += bernoulli_sample(p, rng2);
  const double tol = 5.0 * std::sqrt(p * (1.0 - p) / trials);
  CHECK(std::fabs(static_cast<double>(hits) / trials - p) < tol);

  CHECK_THROWS_AS(bernoulli_sample(-0.01, rng), std::domain_error);
  CHECK_THROWS_AS(bernoulli_sample(1.01, rng), std::domain_error);
  CHECK_THROWS_AS(bernoulli_sample(std::nan(""), rng), std::domain_error);
}
