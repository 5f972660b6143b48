#pragma once

#include <vector>

namespace pcfqfc {

struct PumpConfig {
  double pulse_energy_J;
  double duration_fwhm_s;
  double rep_rate_Hz;
  double bandwidth_nm;
};

/// Peak power of a Gaussian pulse, 0.94 E / T_FWHM. Throws DomainError on
/// non-positive fields.
double peak_power(const PumpConfig& cfg);

/// sinc^2(delta_beta L / 2).
double eta_sinc(double delta_beta_per_m, double length_m);

struct ConversionResult {
  double eta;
  double kappa_per_m;
  double delta_beta_per_m;
  double power_p_W;
  double power_q_W;
};

/// Bragg-scattering conversion efficiency
///   eta = (4 g^2 Pp Pq / kappa^2) sin^2(kappa L),
///   kappa = sqrt((delta_beta / 2)^2 + 4 g^2 Pp Pq),
/// evaluated as 4 g^2 Pp Pq L^2 sinc^2(kappa L) so kappa -> 0 is continuous.
/// gamma in 1/(W m).
ConversionResult eta_bsfwm(double gamma_per_W_m, double power_p_W,
                           double power_q_W, double delta_beta_per_m,
                           double length_m);

struct PowerScanPoint {
  double power_p_W;
  double eta;
};

/// eta_bsfwm at each P_p of an increasing grid (ConfigError otherwise).
std::vector<PowerScanPoint> power_scan(double gamma_per_W_m, double power_q_W,
                                       const std::vector<double>& power_p_grid_W,
                                       double delta_beta_per_m, double length_m);

/// Coupling-in, internal conversion and collection factors of one
/// end-to-end conversion measurement.
struct EfficiencyChain {
  double eta_in;
  double eta_internal;
  double eta_out;

  double total() const;
};

/// Product of the three factors; throws DomainError if any is outside [0, 1].
double chain_total(const EfficiencyChain& chain);

} // namespace pcfqfc
