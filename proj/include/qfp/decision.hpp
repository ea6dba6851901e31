#ifndef QFP_DECISION_HPP
#define QFP_DECISION_HPP

// Referee decision engine: Poisson tail probabilities, the min-max click
// threshold, and the equal/different verdict it induces.

#include <cstdint>
#include <string>

#include "qfp/optics.hpp"

namespace qfp {

enum class Verdict { Equal, Different };

// "equal" / "different", matching the CSV vocabulary.
std::string to_string(Verdict v);

struct DecisionRule {
  std::int64_t threshold = 0;  // verdict flips above this many D1 clicks
  double err_equal = 0;        // P(declare different | equal inputs)
  double err_diff = 0;         // P(declare equal | worst-case different)
  double epsilon = 0;          // max of the two
};

// P(X <= k) for X ~ Poisson(lambda).  Direct summation up to lambda = 50,
// regularized incomplete gamma in log space beyond; absolute error below
// 1e-12 throughout.  Negative or non-finite arguments throw.
double poisson_cdf(std::int64_t k, double lambda);

// P(X > k), computed without forming 1 - cdf so that far tails keep
// relative accuracy down to the underflow floor.
double poisson_sf(std::int64_t k, double lambda);

// Integer threshold minimizing max(P(X > th | lambda_equal),
// P(X <= th | lambda_diff)); ties go to the smaller threshold.  Throws
// std::domain_error when lambda_diff <= lambda_equal, since the two
// hypotheses are then statistically indistinguishable.
DecisionRule choose_threshold(double lambda_equal, double lambda_diff);

// Equal iff counts_d1 <= rule.threshold (inclusive boundary).
Verdict decide(std::int64_t counts_d1, const DecisionRule& rule);

// Expected D1 clicks at distance 0 and at fraction `delta`, fed through
// choose_threshold.  delta must lie strictly inside (0, 1).
DecisionRule protocol_error_bound(const SystemParams& params, std::uint64_t m,
                                  double delta);

}  // namespace qfp

#endif  // QFP_DECISION_HPP
