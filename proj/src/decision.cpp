#include "qfp/decision.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qfp {

namespace {

constexpr double kSeriesLambdaMax = 50.0;

void require_tail_args(std::int64_t k, double lambda, const char* who) {
  if (k < 0)
    throw std::domain_error(std::string(who) + ": k must be nonnegative");
  if (!(lambda >= 0) || !std::isfinite(lambda))
    throw std::domain_error(std::string(who) +
                            ": lambda must be finite and nonnegative");
}

// Lower regularized incomplete gamma P(a, x) by its power series around 0.
// Converges quickly for x < a + 1; the log-space prefactor keeps far tails
// from underflowing prematurely.
double gamma_p_series(double a, double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int i = 1; i < 100000; ++i) {
    term *= x / (a + i);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return std::exp(a * std::log(x) - x - std::lgamma(a + 1.0)) * sum;
}

// Upper regularized incomplete gamma Q(a, x) by a modified Lentz continued
// fraction, reliable for x >= a + 1.
double gamma_q_cf(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(a * std::log(x) - x - std::lgamma(a)) * h;
}

double clamp01(double p) { return p < 0 ? 0.0 : (p > 1 ? 1.0 : p); }

}  // namespace

std::string to_string(Verdict v) {
  return v == Verdict::Equal ? "equal" : "different";
}

double poisson_cdf(std::int64_t k, double lambda) {
  require_tail_args(k, lambda, "poisson_cdf");
  if (lambda == 0) return 1.0;
  if (lambda <= kSeriesLambdaMax) {
    // exp(-50) is still comfortably inside double range, so the plain term
    // recurrence is exact to roundoff here.
    double term = std::exp(-lambda);
    double sum = term;
    for (std::int64_t j = 1; j <= k; ++j) {
      term *= lambda / static_cast<double>(j);
      sum += term;
      if (j > lambda && term < sum * 1e-18) break;
    }
    return clamp01(sum);
  }
  const double a = static_cast<double>(k) + 1.0;
  if (lambda < a + 1.0) return clamp01(1.0 - gamma_p_series(a, lambda));
  return clamp01(gamma_q_cf(a, lambda));
}

double poisson_sf(std::int64_t k, double lambda) {
  require_tail_args(k, lambda, "poisson_sf");
  if (lambda == 0) return 0.0;
  const double a = static_cast<double>(k) + 1.0;
  // The series route is exactly the tail sum starting at k + 1, so it keeps
  // relative accuracy however small the tail is; past the mean the
  // complement of the continued fraction is safe because sf is order one.
  if (lambda < a + 1.0) return clamp01(gamma_p_series(a, lambda));
  return clamp01(1.0 - gamma_q_cf(a, lambda));
}

DecisionRule choose_threshold(double lambda_equal, double lambda_diff) {
  if (!(lambda_equal >= 0) || !std::isfinite(lambda_equal))
    throw std::domain_error(
        "choose_threshold: lambda_equal must be finite and nonnegative");
  if (!std::isfinite(lambda_diff) || !(lambda_diff > lambda_equal))
    throw std::domain_error(
        "choose_threshold: lambda_diff must exceed lambda_equal; the two "
        "hypotheses are indistinguishable");

  // Past lambda_diff plus a dozen standard deviations err_diff has swamped
  // any possible err_equal improvement, so the scan can stop there.
  const std::int64_t max_th = static_cast<std::int64_t>(
      std::llround(lambda_diff + 12.0 * std::sqrt(lambda_diff + 1.0) + 20.0));
  DecisionRule best;
  best.epsilon = std::numeric_limits<double>::infinity();
  for (std::int64_t th = 0; th <= max_th; ++th) {
    const double ee = poisson_sf(th, lambda_equal);
    const double ed = poisson_cdf(th, lambda_diff);
    const double eps = ee > ed ? ee : ed;
    if (eps < best.epsilon) best = {th, ee, ed, eps};
    // err_diff only grows with th; once it alone exceeds the incumbent no
    // later threshold can win.
    if (ed > best.epsilon) break;
  }
  return best;
}

Verdict decide(std::int64_t counts_d1, const DecisionRule& rule) {
  if (counts_d1 < 0)
    throw std::domain_error("decide: counts_d1 must be nonnegative");
  return counts_d1 <= rule.threshold ? Verdict::Equal : Verdict::Different;
}

DecisionRule protocol_error_bound(const SystemParams& params, std::uint64_t m,
                                  double delta) {
  if (!(delta > 0) || !(delta < 1))
    throw std::domain_error(
        "protocol_error_bound: delta must lie strictly inside (0, 1)");
  const DetectionMeans equal = expected_counts(params, m, 0.0);
  const DetectionMeans diff = expected_counts(params, m, delta);
  return choose_threshold(equal.lambda_d1, diff.lambda_d1);
}

}  // namespace qfp
