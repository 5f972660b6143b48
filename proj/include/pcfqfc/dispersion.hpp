#pragma once

#include "pcfqfc/empirical.hpp"
#include "pcfqfc/material.hpp"

#include <vector>

namespace pcfqfc {

/// The fiber under design: lattice pitch, air-hole diameter over pitch,
/// length and Kerr coefficient.
struct FiberGeometry {
  double pitch_um = 0.0;
  double hole_ratio = 0.0;
  double length_m = 0.0;
  double gamma_per_W_km = 0.0;

  double gamma_per_W_m() const { return gamma_per_W_km * 1e-3; }
};

/// Propagation quantities of the fundamental mode at one frequency.
struct DispersionSample {
  double omega_rad_s;
  double n_eff;
  double beta_per_m;      // n_eff * omega / c
  double beta1_s_per_m;   // d beta / d omega
  double beta2_s2_per_m;  // d^2 beta / d omega^2
};

struct ModeIndices {
  double n_core;  // bulk silica
  double n_eff;   // fundamental mode
  double n_fsm;   // fundamental space-filling mode of the cladding
};

/// Wavelength window (um) for scans and root brackets.
struct WavelengthWindow {
  double min_um = 0.6;
  double max_um = 1.7;
};

class PcfModel;

/// A model with one geometry fixed: the hole-ratio expansion of the
/// empirical tables is done once. Cheap to copy; holds a reference to the
/// model, which must outlive it.
class BoundFiber {
public:
  BoundFiber(const PcfModel& model, const FiberGeometry& geom);

  ModeIndices mode_indices(double lambda_um) const;
  double effective_index(double lambda_um) const;
  double beta(double omega) const;
  const FiberGeometry& geometry() const { return geom_; }

private:
  const PcfModel* model_;
  FiberGeometry geom_;
  VwExpansion vw_;
};

/// Fundamental-mode dispersion of a solid-core triangular-lattice PCF:
/// silica Sellmeier core index plus the empirical V/W relations,
///   n_eff^2 = n_core^2 - (lambda / (2 pi a_eff))^2 (V^2 - W^2),
///   a_eff = pitch / sqrt(3).
/// Immutable after construction; all methods are safe to call concurrently.
class PcfModel {
public:
  PcfModel(SellmeierMaterial material, EmpiricalCoefficients coefficients);

  /// Loads both data files. Empty arguments fall back to the environment
  /// (PCFQFC_SELLMEIER, PCFQFC_COEFFICIENTS) and then to the installed
  /// data directory.
  static PcfModel load(const std::string& sellmeier_path = {},
                       const std::string& coefficients_path = {});

  const SellmeierMaterial& material() const { return material_; }
  const EmpiricalCoefficients& coefficients() const { return coefficients_; }

  /// Throws DomainError if the geometry violates its invariants or the
  /// empirical model's hole-ratio range.
  void check(const FiberGeometry& geom) const;

  double material_index(double lambda_um) const;
  /// Validates the geometry and pre-expands the empirical tables for it.
  BoundFiber bind(const FiberGeometry& geom) const;
  ModeIndices mode_indices(double lambda_um, const FiberGeometry& geom) const;
  double effective_index(double lambda_um, const FiberGeometry& geom) const;

  double beta(double omega, const FiberGeometry& geom) const;
  double beta1(double omega, const FiberGeometry& geom,
               double rel_step = kDefaultStep) const;
  double beta2(double omega, const FiberGeometry& geom,
               double rel_step = kSecondDerivativeStep) const;
  DispersionSample sample(double omega, const FiberGeometry& geom) const;

  static constexpr double kDefaultStep = 1e-3;
  // beta is smooth enough that the higher-order stencil wins with a wide step.
  static constexpr double kSecondDerivativeStep = 3e-2;

private:
  SellmeierMaterial material_;
  EmpiricalCoefficients coefficients_;
};

/// Every zero of beta2 in the window, ordered by increasing wavelength.
std::vector<double> zero_dispersion_frequencies(const PcfModel& model,
                                                const FiberGeometry& geom,
                                                WavelengthWindow window = {});

/// The shortest-wavelength zero of beta2 in the window (to 1e-4 nm).
/// Throws ConvergenceError("no ZDW in range") when beta2 keeps its sign.
double zero_dispersion_frequency(const PcfModel& model,
                                 const FiberGeometry& geom,
                                 WavelengthWindow window = {});

/// Group delay difference accumulated over the fiber, seconds.
double walkoff(const PcfModel& model, double omega_a, double omega_b,
               const FiberGeometry& geom);

} // namespace pcfqfc
