#include "pcfqfc/dispersion.hpp"

#include "pcfqfc/error.hpp"
#include "pcfqfc/numeric.hpp"
#include "pcfqfc/units.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#ifndef PCFQFC_DATA_DIR
#define PCFQFC_DATA_DIR "data"
#endif

namespace pcfqfc {

namespace {

std::string resolve(const std::string& given, const char* env,
                    const char* file) {
  if (!given.empty()) return given;
  if (const char* v = std::getenv(env); v && *v) return v;
  return (std::filesystem::path(PCFQFC_DATA_DIR) / file).string();
}

} // namespace

PcfModel::PcfModel(SellmeierMaterial material, EmpiricalCoefficients coefficients)
    : material_(std::move(material)), coefficients_(std::move(coefficients)) {}

PcfModel PcfModel::load(const std::string& sellmeier_path,
                        const std::string& coefficients_path) {
  return PcfModel(
      SellmeierMaterial::from_file(
          resolve(sellmeier_path, "PCFQFC_SELLMEIER", "fused_silica.sellmeier")),
      EmpiricalCoefficients::from_file(resolve(
          coefficients_path, "PCFQFC_COEFFICIENTS", "pcf_empirical_vw.coeffs")));
}

void PcfModel::check(const FiberGeometry& geom) const {
  std::ostringstream msg;
  if (!(geom.pitch_um > 0.0)) msg << "pitch must be positive; ";
  if (!(geom.hole_ratio > 0.0 && geom.hole_ratio < 1.0))
    msg << "hole ratio must lie in (0, 1); ";
  if (!(geom.length_m > 0.0)) msg << "length must be positive; ";
  if (!(geom.gamma_per_W_km >= 0.0)) msg << "gamma must be non-negative; ";
  if (const auto& r = coefficients_.hole_ratio(); !r.contains(geom.hole_ratio))
    msg << "hole ratio " << geom.hole_ratio << " outside empirical range ["
        << r.lo << ", " << r.hi << "]; ";
  const auto text = msg.str();
  if (!text.empty())
    throw DomainError("invalid fiber geometry: " + text.substr(0, text.size() - 2));
}

double PcfModel::material_index(double lambda_um) const {
  return material_.index(lambda_um);
}

BoundFiber::BoundFiber(const PcfModel& model, const FiberGeometry& geom)
    : model_(&model), geom_(geom),
      vw_((model.check(geom), model.coefficients().expand(geom.hole_ratio))) {}

ModeIndices BoundFiber::mode_indices(double lambda_um) const {
  const double n_core = model_->material_index(lambda_um);
  const auto vw = vw_.at(lambda_um / geom_.pitch_um);
  if (vw.w * vw.w > vw.v * vw.v) {
    std::ostringstream msg;
    msg << "mode not guided under the empirical model at " << lambda_um
        << " um (W > V)";
    throw DomainError(msg.str());
  }
  const double a_eff = geom_.pitch_um / std::sqrt(3.0);
  const double scale = lambda_um / (kTwoPi * a_eff);
  const double s2 = scale * scale;
  const double n_eff2 = n_core * n_core - s2 * (vw.v * vw.v - vw.w * vw.w);
  const double n_fsm2 = n_core * n_core - s2 * vw.v * vw.v;
  if (!(n_eff2 > 0.0) || !(n_fsm2 > 0.0))
    throw DomainError("empirical model gives a non-positive index squared");
  return {n_core, std::sqrt(n_eff2), std::sqrt(n_fsm2)};
}

double BoundFiber::effective_index(double lambda_um) const {
  return mode_indices(lambda_um).n_eff;
}

double BoundFiber::beta(double omega) const {
  return effective_index(um_from_omega(omega)) * omega / kSpeedOfLight;
}

BoundFiber PcfModel::bind(const FiberGeometry& geom) const {
  return BoundFiber(*this, geom);
}

ModeIndices PcfModel::mode_indices(double lambda_um,
                                   const FiberGeometry& geom) const {
  return bind(geom).mode_indices(lambda_um);
}

double PcfModel::effective_index(double lambda_um,
                                 const FiberGeometry& geom) const {
  return mode_indices(lambda_um, geom).n_eff;
}

double PcfModel::beta(double omega, const FiberGeometry& geom) const {
  return bind(geom).beta(omega);
}

double PcfModel::beta1(double omega, const FiberGeometry& geom,
                       double rel_step) const {
  const auto fiber = bind(geom);
  return numeric::derivative([&](double w) { return fiber.beta(w); }, omega,
                             rel_step * omega);
}

double PcfModel::beta2(double omega, const FiberGeometry& geom,
                       double rel_step) const {
  const auto fiber = bind(geom);
  return numeric::second_derivative([&](double w) { return fiber.beta(w); },
                                    omega, rel_step * omega);
}

DispersionSample PcfModel::sample(double omega, const FiberGeometry& geom) const {
  const double n = effective_index(um_from_omega(omega), geom);
  return {omega, n, n * omega / kSpeedOfLight, beta1(omega, geom),
          beta2(omega, geom)};
}

std::vector<double> zero_dispersion_frequencies(const PcfModel& model,
                                                const FiberGeometry& geom,
                                                WavelengthWindow window) {
  model.check(geom);
  auto b2_of_nm = [&](double nm) { return model.beta2(omega_from_nm(nm), geom); };
  const double lo = window.min_um * 1e3, hi = window.max_um * 1e3;
  // Shrink by the derivative stencil so every evaluation stays in range.
  const double pad = 1.1 * PcfModel::kSecondDerivativeStep * hi;
  const int steps = static_cast<int>(std::ceil((hi - lo) / 5.0));
  std::vector<double> out;
  for (auto [a, b] : numeric::sign_changes(b2_of_nm, lo + pad, hi - pad, steps))
    out.push_back(omega_from_nm(numeric::find_root(b2_of_nm, a, b, 1e-4).x));
  return out;
}

double zero_dispersion_frequency(const PcfModel& model,
                                 const FiberGeometry& geom,
                                 WavelengthWindow window) {
  const auto roots = zero_dispersion_frequencies(model, geom, window);
  if (roots.empty()) {
    std::ostringstream msg;
    msg << "no ZDW in range [" << window.min_um << ", " << window.max_um
        << "] um";
    throw ConvergenceError(msg.str());
  }
  return roots.front();
}

double walkoff(const PcfModel& model, double omega_a, double omega_b,
               const FiberGeometry& geom) {
  model.check(geom);
  if (omega_a == omega_b) return 0.0;
  return geom.length_m *
         std::abs(model.beta1(omega_a, geom) - model.beta1(omega_b, geom));
}

} // namespace pcfqfc
