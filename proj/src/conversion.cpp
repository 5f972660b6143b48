#include "pcfqfc/conversion.hpp"

#include "pcfqfc/error.hpp"
#include "pcfqfc/numeric.hpp"

#include <cmath>

namespace pcfqfc {

double peak_power(const PumpConfig& cfg) {
  if (!(cfg.pulse_energy_J > 0.0 && cfg.duration_fwhm_s > 0.0 &&
        cfg.rep_rate_Hz > 0.0 && cfg.bandwidth_nm > 0.0))
    throw DomainError("pump configuration fields must be positive");
  return 0.94 * cfg.pulse_energy_J / cfg.duration_fwhm_s;
}

double eta_sinc(double delta_beta_per_m, double length_m) {
  if (!(length_m > 0.0)) throw DomainError("fiber length must be positive");
  const double s = numeric::sinc(0.5 * delta_beta_per_m * length_m);
  return s * s;
}

ConversionResult eta_bsfwm(double gamma_per_W_m, double power_p_W,
                           double power_q_W, double delta_beta_per_m,
                           double length_m) {
  if (!(gamma_per_W_m >= 0.0 && power_p_W >= 0.0 && power_q_W >= 0.0))
    throw DomainError("gamma and pump powers must be non-negative");
  if (!(length_m > 0.0)) throw DomainError("fiber length must be positive");
  const double coupling2 = 4.0 * gamma_per_W_m * gamma_per_W_m * power_p_W * power_q_W;
  const double half_db = 0.5 * delta_beta_per_m;
  const double kappa = std::sqrt(half_db * half_db + coupling2);
  const double s = numeric::sinc(kappa * length_m);
  const double eta = coupling2 * length_m * length_m * s * s;
  return {std::min(eta, 1.0), kappa, delta_beta_per_m, power_p_W, power_q_W};
}

std::vector<PowerScanPoint> power_scan(double gamma_per_W_m, double power_q_W,
                                       const std::vector<double>& power_p_grid_W,
                                       double delta_beta_per_m, double length_m) {
  for (std::size_t i = 1; i < power_p_grid_W.size(); ++i)
    if (power_p_grid_W[i] < power_p_grid_W[i - 1])
      throw ConfigError("power grid must be increasing");
  std::vector<PowerScanPoint> out;
  out.reserve(power_p_grid_W.size());
  for (double p : power_p_grid_W)
    out.push_back(
        {p, eta_bsfwm(gamma_per_W_m, p, power_q_W, delta_beta_per_m, length_m).eta});
  return out;
}

double EfficiencyChain::total() const { return chain_total(*this); }

double chain_total(const EfficiencyChain& chain) {
  for (double f : {chain.eta_in, chain.eta_internal, chain.eta_out})
    if (!(f >= 0.0 && f <= 1.0))
      throw DomainError("efficiency factors must lie in [0, 1]");
  return chain.eta_in * chain.eta_internal * chain.eta_out;
}

} // namespace pcfqfc
