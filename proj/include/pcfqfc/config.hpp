#pragma once

#include "pcfqfc/conversion.hpp"
#include "pcfqfc/counting.hpp"
#include "pcfqfc/dispersion.hpp"
#include "pcfqfc/fit.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace pcfqfc {

inline constexpr int kSchemaVersion = 1;

struct ScanSettings {
  double lambda_s_nm = 1551.0;
  double lambda_p_nm = 787.0;
  double lambda_q_min_nm = 810.0;
  double lambda_q_max_nm = 910.0;
  double lambda_q_step_nm = 0.1;
  double bin_width_GHz = 202.0;
  // Pump-q range flagged in tuning output (seeded four-wave-mixing noise).
  std::optional<std::array<double, 2>> exclusion_q_nm;
};

struct PumpSettings {
  PumpConfig p;
  PumpConfig q;
};

struct FitSettings {
  FitParams initial{2.11, 0.337, 0.5};
  FitBounds bounds{};
  FitOptions options{};
};

/// Counting model plus optional calibration targets. A target replaces the
/// corresponding pinned value when the experiment is resolved.
struct ExperimentSettings {
  ExperimentModel model;
  std::optional<double> mu_from_heralded_g2;
  std::optional<double> nu_from_rca;
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  std::string source_path; // empty when parsed from a string
  std::string sellmeier_path;
  std::string coefficients_path;
  std::optional<FiberGeometry> geometry;
  ScanSettings scan;
  std::optional<PumpSettings> pumps;
  FitSettings fit;
  std::optional<ExperimentSettings> experiment;
  std::string output_dir = ".";
  std::optional<std::uint64_t> seed;

  /// The geometry section; ConfigError if the config has none.
  const FiberGeometry& require_geometry() const;
  const ExperimentSettings& require_experiment() const;
};

/// Parses and validates a config document. Relative data paths are resolved
/// against base_dir and must exist. Unknown keys are errors.
RunConfig parse_config(const std::string& text, const std::string& origin,
                       const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

struct ResolvedExperiment {
  ExperimentModel model;
  bool mu_solved = false;
  bool nu_solved = false;
};

/// Applies the calibration targets: mu first (with the noise switched off
/// when it is also to be solved), then the reference noise level.
ResolvedExperiment resolve_experiment(const ExperimentSettings& settings);

} // namespace pcfqfc
