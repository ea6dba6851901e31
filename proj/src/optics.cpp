#include "qfp/optics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qfp {

namespace {

void check(bool ok, const char* field, const char* what) {
  if (!ok)
    throw std::invalid_argument(std::string("SystemParams: ") + field + " " +
                                what);
}

}  // namespace

void SystemParams::validate() const {
  check(mu_total >= 0, "mu_total", "must be >= 0");
  check(rep_rate_hz >= 0, "rep_rate_hz", "must be >= 0");
  check(dark_rate_hz >= 0, "dark_rate_hz", "must be >= 0");
  check(window_s >= 0, "window_s", "must be >= 0");
  check(det_efficiency >= 0 && det_efficiency <= 1, "det_efficiency",
        "must be in [0, 1]");
  check(visibility >= 0 && visibility <= 1, "visibility", "must be in [0, 1]");
  check(arm_loss_db_a >= 0, "arm_loss_db_a", "must be >= 0");
  check(arm_loss_db_b >= 0, "arm_loss_db_b", "must be >= 0");
  check(bs_transmittance_a >= 0 && bs_transmittance_a <= 1,
        "bs_transmittance_a", "must be in [0, 1]");
  check(bs_transmittance_b >= 0 && bs_transmittance_b <= 1,
        "bs_transmittance_b", "must be in [0, 1]");
  check(window_s * rep_rate_hz <= 1.0, "window_s",
        "times rep_rate_hz must be <= 1 (non-overlapping gates)");
}

double SystemParams::detected_mu_a() const {
  return mu_total * db_to_transmittance(arm_loss_db_a) * bs_transmittance_a *
         det_efficiency;
}

double SystemParams::detected_mu_b() const {
  return mu_total * db_to_transmittance(arm_loss_db_b) * bs_transmittance_b *
         det_efficiency;
}

double db_to_transmittance(double loss_db) {
  if (!(loss_db >= 0))
    throw std::invalid_argument("db_to_transmittance: loss must be >= 0 dB");
  return std::pow(10.0, -loss_db / 10.0);
}

double per_pulse_lambda_d1(double mu_a, double mu_b, double visibility,
                           bool phase_equal) {
  if (!(mu_a >= 0) || !(mu_b >= 0))
    throw std::invalid_argument("per_pulse_lambda_d1: negative photon mean");
  if (!(visibility >= 0) || visibility > 1)
    throw std::invalid_argument(
        "per_pulse_lambda_d1: visibility must be in [0, 1]");
  const double cross = visibility * std::sqrt(mu_a * mu_b);
  const double mean =
      0.5 * (mu_a + mu_b) + (phase_equal ? -cross : cross);
  // The equal-phase branch can dip a few ulps below zero at v = 1.
  return mean > 0 ? mean : 0.0;
}

DetectionMeans expected_counts(const SystemParams& params, std::uint64_t m,
                               double distance_fraction) {
  params.validate();
  if (m < 1) throw std::invalid_argument("expected_counts: m must be >= 1");
  if (!(distance_fraction >= 0) || distance_fraction > 1)
    throw std::invalid_argument(
        "expected_counts: distance fraction must be in [0, 1]");
  const double slots = static_cast<double>(m);
  const double mu_a = params.detected_mu_a() / slots;
  const double mu_b = params.detected_mu_b() / slots;
  const double v = params.visibility;
  // D0 is the complementary port: its per-slot mean is the same expression
  // with the interference sign flipped, so photons are conserved slot-wise.
  const double d1_eq = per_pulse_lambda_d1(mu_a, mu_b, v, true);
  const double d1_diff = per_pulse_lambda_d1(mu_a, mu_b, v, false);
  const double d0_eq = per_pulse_lambda_d1(mu_a, mu_b, v, false);
  const double d0_diff = per_pulse_lambda_d1(mu_a, mu_b, v, true);

  const double d = distance_fraction;
  const auto click = [](double lambda) { return -std::expm1(-lambda); };

  DetectionMeans out;
  out.dark_component = slots * params.dark_rate_hz * params.window_s;
  out.signal_component =
      slots * ((1 - d) * click(d1_eq) + d * click(d1_diff));
  out.lambda_d1 = out.dark_component + out.signal_component;
  out.lambda_d0 = out.dark_component +
                  slots * ((1 - d) * click(d0_eq) + d * click(d0_diff));
  out.signal_photons_d1 = slots * ((1 - d) * d1_eq + d * d1_diff);
  out.signal_photons_d0 = slots * ((1 - d) * d0_eq + d * d0_diff);
  return out;
}

}  // namespace qfp
