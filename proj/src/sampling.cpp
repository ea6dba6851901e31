#include "qfp/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace qfp {

namespace {

constexpr double kInversionLambdaMax = 30.0;

// Sequential search through the CDF; one uniform per draw.  exp(-30) is
// around 1e-13, far from underflow, so the term recurrence stays exact.
std::int64_t poisson_inversion(double lambda, CounterRng& rng) {
  const double u = rng.uniform01();
  double p = std::exp(-lambda);
  double s = p;
  std::int64_t x = 0;
  // The cap is ~40 standard deviations out; reachable only through roundoff
  // once s has absorbed the whole distribution.
  const std::int64_t cap =
      static_cast<std::int64_t>(lambda + 40.0 * std::sqrt(lambda + 1.0) + 50.0);
  while (u > s && x < cap) {
    ++x;
    p *= lambda / static_cast<double>(x);
    s += p;
  }
  return x;
}

// Hormann's PTRS transformed rejection, valid for lambda >= 10; constants
// from the published fit.  Expected uniforms per draw is a little over two.
std::int64_t poisson_ptrs(double lambda, CounterRng& rng) {
  const double slam = std::sqrt(lambda);
  const double loglam = std::log(lambda);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);

  for (;;) {
    const double u = rng.uniform01() - 0.5;
    const double v = rng.uniform01();
    const double us = 0.5 - std::fabs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    const double k = kf;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        k * loglam - lambda - std::lgamma(k + 1.0))
      return static_cast<std::int64_t>(kf);
  }
}

}  // namespace

std::int64_t poisson_sample(double lambda, CounterRng& rng) {
  if (!(lambda >= 0) || !std::isfinite(lambda))
    throw std::domain_error(
        "poisson_sample: lambda must be finite and nonnegative");
  if (lambda == 0) return 0;
  if (lambda < kInversionLambdaMax) return poisson_inversion(lambda, rng);
  return poisson_ptrs(lambda, rng);
}

bool bernoulli_sample(double p, CounterRng& rng) {
  if (!(p >= 0) || !(p <= 1))
    throw std::domain_error("bernoulli_sample: p must be in [0, 1]");
  return rng.uniform01() < p;
}

}  // namespace qfp
