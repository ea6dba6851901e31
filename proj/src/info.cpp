#include "qfp/info.hpp"

#include <cmath>
#include <stdexcept>

#include "qfp/toeplitz.hpp"

namespace qfp {

double quantum_info_bound(double mu, std::uint64_t m) {
  if (!(mu >= 0) || !std::isfinite(mu))
    throw std::invalid_argument(
        "quantum_info_bound: mu must be finite and nonnegative");
  if (m < 1)
    throw std::invalid_argument("quantum_info_bound: m must be >= 1");
  if (mu == 0) return 0.0;  // 0 log 0 convention
  return mu * std::log2(static_cast<double>(m)) +
         (mu + 1.0) * std::log2(mu + 1.0) - mu * std::log2(mu);
}

double classical_limit(std::uint64_t n, double epsilon) {
  if (n < 1) throw std::invalid_argument("classical_limit: n must be >= 1");
  if (!(epsilon >= 0) || !std::isfinite(epsilon))
    throw std::invalid_argument(
        "classical_limit: epsilon must be finite and nonnegative");
  const double prefactor = 1.0 - 2.0 * std::sqrt(epsilon);
  if (prefactor <= 0) return 0.0;  // bound degenerates past epsilon = 1/4
  const double bits =
      prefactor * std::sqrt(static_cast<double>(n) / (2.0 * std::log(2.0))) -
      1.0;
  return bits > 0 ? bits : 0.0;
}

double best_known_classical(std::uint64_t n) {
  if (n < 1)
    throw std::invalid_argument("best_known_classical: n must be >= 1");
  return 32.0 * std::sqrt(static_cast<double>(n));
}

InfoReport advantage_report(std::uint64_t n, double mu,
                            double mu_rel_uncertainty, double rate,
                            double epsilon) {
  if (!(mu_rel_uncertainty >= 0) || !(mu_rel_uncertainty <= 1))
    throw std::invalid_argument(
        "advantage_report: mu_rel_uncertainty must be in [0, 1]");
  InfoReport r;
  r.n = n;
  r.m = codeword_length(n, rate);
  r.mu = mu;
  r.q_bits = quantum_info_bound(mu, r.m);
  r.q_bits_low = quantum_info_bound(mu * (1.0 - mu_rel_uncertainty), r.m);
  r.q_bits_high = quantum_info_bound(mu * (1.0 + mu_rel_uncertainty), r.m);
  r.c_limit_bits = classical_limit(n, epsilon);
  r.c_best_known_bits = best_known_classical(n);
  r.gamma = r.q_bits > 0 ? r.c_limit_bits / r.q_bits : 0.0;
  return r;
}

}  // namespace qfp
