#ifndef QFP_OPTICS_HPP
#define QFP_OPTICS_HPP

// Analytic model of the referee's interferometric detection: two weak
// coherent pulse trains meet on a beam splitter, D1 is the difference port
// (dark for equal phases at perfect visibility), D0 the sum port.

#include <cstdint>

namespace qfp {

struct SystemParams {
  // Mean photon number per party summed over the whole m-pulse sequence.
  double mu_total = 0;
  double rep_rate_hz = 0;
  double dark_rate_hz = 0;
  // Effective detection gate per pulse slot, seconds.
  double window_s = 0;
  double det_efficiency = 0;
  double visibility = 0;
  // Fibre loss on each party's path to the referee.
  double arm_loss_db_a = 0;
  double arm_loss_db_b = 0;
  // Referee-side optics transmittance per arm.
  double bs_transmittance_a = 0;
  double bs_transmittance_b = 0;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;

  // Detected mean photon number for one party over the full sequence:
  // mu_total * fibre transmittance * referee optics * detector efficiency.
  double detected_mu_a() const;
  double detected_mu_b() const;
};

struct DetectionMeans {
  double lambda_d1 = 0;  // expected clicks at D1 over the sequence
  double lambda_d0 = 0;  // expected clicks at D0
  double dark_component = 0;    // dark share of lambda_d1 (same for D0)
  double signal_component = 0;  // photon share of lambda_d1
  // Mean photon numbers (not clicks) reaching each detector; these satisfy
  // exact conservation and mu-linearity, which the click means only approach
  // in the weak-pulse regime.
  double signal_photons_d1 = 0;
  double signal_photons_d0 = 0;
};

// 10^(-loss_db / 10); rejects negative loss.
double db_to_transmittance(double loss_db);

// Mean photon number leaving the D1 port for one pulse pair with per-pulse
// means mu_a, mu_b: (mu_a + mu_b)/2 -+ v * sqrt(mu_a * mu_b), minus sign for
// equal phases.  Reduces to a perfectly dark port at v = 1, equal inputs.
double per_pulse_lambda_d1(double mu_a, double mu_b, double visibility,
                           bool phase_equal);

// Expected detector statistics when a fraction d of the m codeword positions
// differ.  Clicks use the exact per-slot form 1 - exp(-lambda); dark counts
// are gated per slot: dark_rate_hz * window_s.
DetectionMeans expected_counts(const SystemParams& params, std::uint64_t m,
                               double distance_fraction);

}  // namespace qfp

#endif  // QFP_OPTICS_HPP
