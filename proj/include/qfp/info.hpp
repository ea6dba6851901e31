#ifndef QFP_INFO_HPP
#define QFP_INFO_HPP

// Information bookkeeping: bits carried by the quantum fingerprints, the
// classical lower bound they compete against, and the advantage ratio gamma.

#include <cstdint>

namespace qfp {

struct InfoReport {
  std::uint64_t n = 0;  // input length in bits
  std::uint64_t m = 0;  // codeword length at the configured rate
  double mu = 0;        // mean photon number per party, whole sequence
  double q_bits = 0;
  double q_bits_low = 0;   // q at mu * (1 - mu_rel_uncertainty)
  double q_bits_high = 0;  // q at mu * (1 + mu_rel_uncertainty)
  double c_limit_bits = 0;
  double c_best_known_bits = 0;
  double gamma = 0;  // c_limit_bits / q_bits; 0 by convention when q_bits = 0
};

// Holevo-style bound on the information a sequence of m pulse slots carrying
// mu photons in total can transmit:
//   Q = mu log2 m + (mu + 1) log2(mu + 1) - mu log2 mu,  Q(0, m) = 0.
double quantum_info_bound(double mu, std::uint64_t m);

// Lower bound on any classical fingerprint beating error epsilon:
//   max(0, (1 - 2 sqrt(epsilon)) sqrt(n / (2 ln 2)) - 1).
// The prefactor crosses zero at epsilon = 1/4; beyond it the bound clamps to
// 0 rather than throwing, callers that care emit the warning.
double classical_limit(std::uint64_t n, double epsilon);

// Cost of the best known classical protocol, 32 sqrt(n).
double best_known_classical(std::uint64_t n);

// Composes the three bounds at codeword length m = ceil(n / rate), with the
// mu uncertainty band evaluated at mu * (1 -+ mu_rel_uncertainty).
InfoReport advantage_report(std::uint64_t n, double mu,
                            double mu_rel_uncertainty, double rate,
                            double epsilon);

}  // namespace qfp

#endif  // QFP_INFO_HPP
