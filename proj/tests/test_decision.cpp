#include "qfp/decision.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "qfp/optics.hpp"

using namespace qfp;

namespace {

// Oracle Poisson mass: every term evaluated independently in long double via
// exp(j ln l - l - lgamma(j + 1)), no ratio recurrence shared with the
// library, so agreement is not a tautology.
long double oracle_pmf(std::int64_t j, long double lambda) {
  if (lambda == 0.0L) return j == 0 ? 1.0L : 0.0L;
  const long double lj = static_cast<long double>(j);
  return std::exp(lj * std::log(lambda) - lambda - std::lgamma(lj + 1.0L));
}

long double oracle_cdf(std::int64_t k, long double lambda) {
  long double sum = 0.0L;
  for (std::int64_t j = 0; j <= k; ++j) {
    const long double t = oracle_pmf(j, lambda);
    sum += t;
    if (j > lambda && t < 1e-36L * sum) break;
  }
  return sum > 1.0L ? 1.0L : sum;
}

long double oracle_sf(std::int64_t k, long double lambda) {
  long double sum = 0.0L;
  for (std::int64_t j = k + 1; j < k + 2000000; ++j) {
    const long double t = oracle_pmf(j, lambda);
    sum += t;
    if (j > lambda && t < 1e-36L * (sum + 1e-4900L)) break;
  }
  return sum > 1.0L ? 1.0L : sum;
}

// Brute-force min-max threshold over an exhaustive scan of the oracle tails.
struct OracleRule {
  std::int64_t threshold = 0;
  long double err_equal = 0.0L;
  long double err_diff = 0.0L;
  long double epsilon = 2.0L;
};

OracleRule oracle_threshold(long double lambda_equal, long double lambda_diff,
                            std::int64_t max_th) {
  OracleRule best;
  for (std::int64_t th = 0; th <= max_th; ++th) {
    const long double ee = oracle_sf(th, lambda_equal);
    const long double ed = oracle_cdf(th, lambda_diff);
    const long double eps = ee > ed ? ee : ed;
    if (eps < best.epsilon) best = {th, ee, ed, eps};
  }
  return best;
}

bool rel_close(double got, long double want, double tol) {
  const long double g = got;
  const long double mag = std::fabs(want) > std::fabs(g) ? std::fabs(want)
                                                         : std::fabs(g);
  if (mag < 1e-290L) return true;  // below double's meaningful range
  return std::fabs(g - want) <= tol * mag;
}

SystemParams reference_params(double per_arm_loss_db) {
  SystemParams p;
  p.mu_total = 650;
  p.rep_rate_hz = 25e6;
  p.dark_rate_hz = 0.11;
  p.window_s = 2.5e-9;
  p.det_efficiency = 0.456;
  p.visibility = 0.96;
  p.arm_loss_db_a = per_arm_loss_db;
  p.arm_loss_db_b = per_arm_loss_db;
  p.bs_transmittance_a = 0.8016;
  p.bs_transmittance_b = 0.785;
  return p;
}

constexpr std::uint64_t kReferenceM = 8'333'333'334ull;

}  // namespace

TEST_CASE("poisson cdf closed forms and domain") {
  CHECK(poisson_cdf(0, 0.0) == 1.0);
  CHECK(poisson_cdf(7, 0.0) == 1.0);
  CHECK(poisson_cdf(0, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(poisson_cdf(5, 5.0) == doctest::Approx(0.6159606548).epsilon(1e-9));
  CHECK(poisson_cdf(1000, 5.0) == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(poisson_cdf(-1, 5.0), std::domain_error);
  CHECK_THROWS_AS(poisson_cdf(3, -0.5), std::domain_error);
  CHECK_THROWS_AS(poisson_cdf(3, std::nan("")), std::domain_error);
  CHECK_THROWS_AS(poisson_sf(-1, 5.0), std::domain_error);
  CHECK_THROWS_AS(poisson_sf(3, -0.5), std::domain_error);
}

TEST_CASE("poisson tails agree with the log-space oracle in both regimes") {
  // Straddles the lambda = 50 switch between direct summation and the
  // incomplete-gamma evaluation.
  const double lambdas[] = {0.01, 0.7,  5.0,  29.9,  49.9,
                            50.0, 50.1, 71.0, 123.4, 200.0};
  const std::int64_t ks[] = {0, 1, 3, 10, 30, 50, 80, 140, 260};
  for (double lambda : lambdas) {
    for (std::int64_t k : ks) {
      CAPTURE(lambda);
      CAPTURE(k);
      const double cdf = poisson_cdf(k, lambda);
      const double sf = poisson_sf(k, lambda);
      CHECK(std::fabs(cdf - static_cast<double>(oracle_cdf(k, lambda))) <
            1e-12);
      CHECK(rel_close(sf, oracle_sf(k, lambda), 1e-9));
      CHECK(cdf >= 0.0);
      CHECK(cdf <= 1.0);
      CHECK(sf >= 0.0);
      CHECK(sf <= 1.0);
      // The two tails partition the distribution.
      CHECK(std::fabs(cdf + sf - 1.0) < 1e-12);
      // Monotone tails as the cut moves right.
      CHECK(poisson_cdf(k + 1, lambda) >= cdf);
      CHECK(poisson_sf(k + 1, lambda) <= sf);
    }
  }
}

TEST_CASE("tiny tail masses keep relative accuracy") {
  // sf(k, lambda) far above the mean underflows any naive 1 - cdf route;
  // these sit around 1e-20..1e-80 and must come out relatively accurate.
  const struct {
    std::int64_t k;
    double lambda;
  } pts[] = {{40, 5.0}, {90, 20.0}, {160, 60.0}, {260, 100.0}};
  for (const auto& pt : pts) {
    CAPTURE(pt.k);
    CAPTURE(pt.lambda);
    const long double want = oracle_sf(pt.k, pt.lambda);
    REQUIRE(want > 0.0L);
    REQUIRE(want < 1e-15L);
    CHECK(rel_close(poisson_sf(pt.k, pt.lambda), want, 1e-9));
  }
}

TEST_CASE("threshold choice matches a brute-force oracle scan") {
  const struct {
    double eq;
    double diff;
  } pairs[] = {{0.5, 3.0},  {2.0, 9.0},   {8.3, 71.0}, {0.05, 20.0},
               {30.0, 60.0}, {55.0, 120.0}, {70.0, 150.0}};
  for (const auto& pr : pairs) {
    CAPTURE(pr.eq);
    CAPTURE(pr.diff);
    const DecisionRule rule = choose_threshold(pr.eq, pr.diff);
    const OracleRule want = oracle_threshold(pr.eq, pr.diff, 300);
    CHECK(rule.threshold == want.threshold);
    CHECK(rel_close(rule.err_equal, want.err_equal, 1e-9));
    CHECK(rel_close(rule.err_diff, want.err_diff, 1e-9));
    CHECK(rule.epsilon == std::max(rule.err_equal, rule.err_diff));
    CHECK(rule.threshold >= 0);
    CHECK(rule.err_equal >= 0.0);
    CHECK(rule.err_equal <= 1.0);
    CHECK(rule.err_diff >= 0.0);
    CHECK(rule.err_diff <= 1.0);

    // Local optimality: one step either way must not beat the chosen point.
    const auto max_at = [&](std::int64_t th) {
      return std::max(poisson_sf(th, pr.eq), poisson_cdf(th, pr.diff));
    };
    if (rule.threshold > 0) CHECK(max_at(rule.threshold - 1) >= rule.epsilon);
    CHECK(max_at(rule.threshold + 1) >= rule.epsilon);
  }
}

TEST_CASE("threshold frozen examples and degenerate inputs") {
  const DecisionRule dark_port = choose_threshold(0.0, 10.0);
  CHECK(dark_port.threshold == 0);
  CHECK(dark_port.err_equal == 0.0);
  CHECK(dark_port.err_diff == doctest::Approx(std::exp(-10.0)).epsilon(1e-12));
  CHECK(dark_port.epsilon == dark_port.err_diff);

  const DecisionRule paper_20km = choose_threshold(8.3, 71.0);
  CHECK(paper_20km.threshold >= 25);
  CHECK(paper_20km.threshold <= 33);
  CHECK(paper_20km.epsilon < 1e-5);

  CHECK_THROWS_AS(choose_threshold(5.0, 5.0), std::domain_error);
  CHECK_THROWS_AS(choose_threshold(5.0, 4.999), std::domain_error);
  CHECK_THROWS_AS(choose_threshold(-0.1, 5.0), std::domain_error);
  CHECK_THROWS_AS(choose_threshold(1.0, std::nan("")), std::domain_error);
  CHECK_THROWS_AS(
      choose_threshold(1.0, std::numeric_limits<double>::infinity()),
      std::domain_error);
}

TEST_CASE("verdict from counts against the threshold") {
  DecisionRule rule;
  rule.threshold = 0;
  CHECK(decide(0, rule) == Verdict::Equal);
  CHECK(decide(1, rule) == Verdict::Different);

  rule.threshold = 29;
  CHECK(decide(28, rule) == Verdict::Equal);
  CHECK(decide(29, rule) == Verdict::Equal);  // boundary is inclusive
  CHECK(decide(30, rule) == Verdict::Different);
  CHECK(decide(100000, rule) == Verdict::Different);
  CHECK_THROWS_AS(decide(-1, rule), std::domain_error);

  CHECK(to_string(Verdict::Equal) == "equal");
  CHECK(to_string(Verdict::Different) == "different");
}

TEST_CASE("end-to-end error bound in the ideal configuration") {
  // Perfect visibility and no dark counts: the equal case is exactly dark,
  // the threshold collapses to 0, and err_diff is the no-click probability.
  SystemParams p;
  p.mu_total = 40;
  p.rep_rate_hz = 25e6;
  p.dark_rate_hz = 0;
  p.window_s = 2.5e-9;
  p.det_efficiency = 1.0;
  p.visibility = 1.0;
  p.arm_loss_db_a = 0;
  p.arm_loss_db_b = 0;
  p.bs_transmittance_a = 0.5;
  p.bs_transmittance_b = 0.5;

  const std::uint64_t m = 1'000'000;
  const DecisionRule rule = protocol_error_bound(p, m, 0.22);
  const DetectionMeans diff = expected_counts(p, m, 0.22);
  CHECK(rule.threshold == 0);
  CHECK(rule.err_equal == 0.0);
  CHECK(rule.err_diff ==
        doctest::Approx(std::exp(-diff.lambda_d1)).epsilon(1e-9));
  CHECK(rule.epsilon == rule.err_diff);
}

TEST_CASE("checked-in operating points beat the target error budget") {
  for (double loss_db : {0.0, 0.93, 1.96}) {
    CAPTURE(loss_db);
    const DecisionRule rule =
        protocol_error_bound(reference_params(loss_db), kReferenceM, 0.22);
    CHECK(rule.epsilon <= 2.6e-5);
    CHECK(rule.threshold > 0);
  }

  // No photons at all: both hypotheses reduce to dark counts.
  SystemParams dead = reference_params(1.96);
  dead.mu_total = 0;
  CHECK_THROWS_AS(protocol_error_bound(dead, kReferenceM, 0.22),
                  std::domain_error);

  CHECK_THROWS_AS(protocol_error_bound(reference_params(0.0), kReferenceM, 0.0),
                  std::domain_error);
  CHECK_THROWS_AS(protocol_error_bound(reference_params(0.0), kReferenceM, 1.0),
                  std::domain_error);
}

TEST_CASE("error bound improves with brighter pulses") {
  // Holding everything else at the 20 km operating point, more photons can
  // only sharpen the separation between the two hypotheses.
  double prev = 2.0;
  for (double mu : {100.0, 200.0, 350.0, 500.0, 650.0, 800.0, 950.0}) {
    CAPTURE(mu);
    SystemParams p = reference_params(1.96);
    p.mu_total = mu;
    const double eps = protocol_error_bound(p, kReferenceM, 0.22).epsilon;
    CHECK(eps <= prev);
    prev = eps;
  }
}
