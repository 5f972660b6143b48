#pragma once

#include "pcfqfc/dispersion.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pcfqfc {

/// Signal, two pumps and target of a Bragg-scattering four-wave-mixing
/// process. The target frequency is always derived from the other three, so
/// energy conservation cannot be violated by construction.
class FieldQuartet {
public:
  /// Throws DomainError when omega_s + omega_p - omega_q <= 0.
  FieldQuartet(double omega_s, double omega_p, double omega_q);

  double omega_s() const { return omega_s_; }
  double omega_p() const { return omega_p_; }
  double omega_q() const { return omega_q_; }
  double omega_t() const { return omega_s_ + omega_p_ - omega_q_; }

  static FieldQuartet from_nm(double lambda_s, double lambda_p, double lambda_q);

private:
  double omega_s_, omega_p_, omega_q_;
};

struct QuartetSolution {
  FieldQuartet fields;
  double delta_beta_per_m;
  double eta_sinc;
};

/// omega_s + omega_p - omega_q; throws DomainError if not positive.
double target_frequency(double omega_s, double omega_p, double omega_q);

/// Target wavelength from wavenumber arithmetic
/// 1/lambda_t = 1/lambda_s + 1/lambda_p - 1/lambda_q (all in nm).
double target_wavelength_nm(double lambda_s, double lambda_p, double lambda_q);

/// beta_p + beta_s - beta_q - beta_t.
double phase_mismatch(const PcfModel& model, const FieldQuartet& f,
                      const FiberGeometry& geom);

QuartetSolution solve_quartet(const PcfModel& model, const FieldQuartet& f,
                              const FiberGeometry& geom);

/// Mirror image 2 omega_0 - omega about the zero-dispersion frequency.
double symmetric_partner(double omega, double omega_0);

/// Frequency on the other side of the zero-dispersion point with the same
/// group delay per unit length as omega (to 0.01 nm).
double gv_matched_partner(const PcfModel& model, double omega,
                          const FiberGeometry& geom,
                          WavelengthWindow window = {});

struct TuningRow {
  double lambda_q_nm;
  double lambda_t_nm;
  // Unset when the dispersion model could not be evaluated at this point.
  std::optional<double> delta_beta_per_m;
  std::optional<double> eta;
  std::string error;
};

struct TuningCurve {
  double lambda_s_nm;
  double lambda_p_nm;
  FiberGeometry geometry;
  std::vector<TuningRow> rows;

  std::size_t gap_count() const;
};

/// Scans lambda_q over a strictly increasing grid. Points where the model
/// throws are kept as gaps with the error text; the grid itself must be
/// valid (ConfigError otherwise).
TuningCurve tuning_curve(const PcfModel& model, double lambda_s_nm,
                         double lambda_p_nm,
                         const std::vector<double>& lambda_q_grid_nm,
                         const FiberGeometry& geom);

/// Inclusive grid lo, lo + step, ..., hi (hi appended if step does not land
/// on it).
std::vector<double> linear_grid(double lo, double hi, double step);

/// Number of non-overlapping frequency bins of the given width that fit in
/// the optical-frequency span of [lambda_lo, lambda_hi].
long independent_bins(double lambda_lo_nm, double lambda_hi_nm,
                      double bin_width_hz);

/// Pump wavelength that puts the target at lambda_t:
/// 1/lambda_q = 1/lambda_s + 1/lambda_p - 1/lambda_t.
/// Throws DomainError naming the valid window when lambda_q falls outside it.
double solve_q_for_target(double lambda_t_nm, double lambda_s_nm,
                          double lambda_p_nm, WavelengthWindow window = {});

struct PumpOptimum {
  double lambda_p_nm;
  double lambda_q_nm;
  double eta;
  bool at_boundary; // no interior maximum; the best window edge was returned
};

/// Maximises sinc^2(delta_beta L / 2) over lambda_p in [p_lo, p_hi] with
/// lambda_q slaved to the target. Coarse scan, then golden-section on every
/// bracketed local maximum. Ties within 1e-9 go to the point closest to the
/// window centre. If `reference_lambda_p` is given it is included among the
/// candidates, so the result never does worse than that setting.
PumpOptimum optimize_p_for_target(const PcfModel& model, double lambda_t_nm,
                                  double lambda_s_nm, const FiberGeometry& geom,
                                  double p_lo_nm, double p_hi_nm,
                                  std::optional<double> reference_lambda_p = {},
                                  WavelengthWindow window = {});

} // namespace pcfqfc
