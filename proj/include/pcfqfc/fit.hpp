#pragma once

#include "pcfqfc/dispersion.hpp"
#include "pcfqfc/nelder_mead.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace pcfqfc {

/// Fixed experimental settings shared by every row of a depletion scan.
struct ScanContext {
  double lambda_s_nm = 1551.0;
  double lambda_p_nm = 787.0;
  double length_m = 0.1;
};

struct Observation {
  double lambda_q_nm;
  double depletion;
  double sigma; // standard error; 1 when the data carried none
};

/// Depletion-vs-lambda_q measurements. Rows are kept sorted by lambda_q;
/// duplicates, non-positive sigma, depletion outside [0, 1] and fewer than
/// four rows are rejected with ConfigError. Unweighted sets carry sigma = 1
/// and have their parameter errors scaled by the residual variance.
class ObservationSet {
public:
  ObservationSet(std::vector<Observation> rows, ScanContext context,
                 bool weighted = true);

  const std::vector<Observation>& rows() const { return rows_; }
  const ScanContext& context() const { return context_; }
  std::size_t size() const { return rows_.size(); }
  bool weighted() const { return weighted_; }

private:
  std::vector<Observation> rows_;
  ScanContext context_;
  bool weighted_;
};

struct FitParams {
  double pitch_um;
  double hole_ratio;
  double scale;
};

struct FitBounds {
  std::array<double, 2> pitch_um{1.8, 2.4};
  std::array<double, 2> hole_ratio{0.25, 0.45};
  std::array<double, 2> scale{0.0, 1.0};

  bool contains(const FitParams& p) const;
};

/// scale * sinc^2(delta_beta(lambda_q; pitch, d/pitch) L / 2).
double model_depletion(const PcfModel& model, double lambda_q_nm,
                       const FitParams& params, const ScanContext& context);

/// Same model on a whole grid, binding the geometry once.
std::vector<double> model_depletion_curve(const PcfModel& model,
                                          const std::vector<double>& lambda_q_nm,
                                          const FitParams& params,
                                          const ScanContext& context);

struct FitOptions {
  int restarts = 5;
  // Coarse (pitch, d/pitch) grid with the scale profiled out in closed form;
  // its best local minima seed restarts 1..n-1. Zero disables the scan.
  int prescan_pitch = 61;
  int prescan_ratio = 81;
  double jitter = 0.05;          // restart spread, scaled parameter units
  std::uint64_t seed = 20220727; // for the restart jitter
  NelderMeadOptions simplex{};
};

struct FitResult {
  FitParams params{};
  std::array<double, 3> uncertainty{}; // NaN where the curvature is singular
  double residual_sum = 0.0;
  int iterations = 0;       // of the winning restart
  int total_iterations = 0; // across restarts
  bool converged = false;
  std::vector<double> best_history; // winning restart's best-vertex SSR
  int winning_restart = 0;
};

/// Weighted least squares of model_depletion against the observations with
/// Nelder-Mead in bound-scaled coordinates. Restart 0 starts at the initial
/// guess, restarts 1..n-1 at the best grid-local minima of the pre-scan.
/// Restarts the scan cannot fill start from seeded jitter around the guess.
/// The lowest SSR wins.
/// Throws DomainError when the initial guess is out of bounds.
FitResult fit_geometry(const PcfModel& model, const ObservationSet& obs,
                       const FitBounds& bounds, const FitParams& initial_guess,
                       const FitOptions& options = {});

double weighted_ssr(const PcfModel& model, const ObservationSet& obs,
                    const FitParams& params);

/// model_depletion plus seeded Gaussian noise, clipped to [0, 1]. The sigma
/// column carries noise_sigma, or 1 when noise_sigma is zero.
ObservationSet synthesize_observations(const PcfModel& model,
                                       const FitParams& params,
                                       const std::vector<double>& lambda_q_grid,
                                       const ScanContext& context,
                                       double noise_sigma, std::uint64_t seed);

} // namespace pcfqfc
