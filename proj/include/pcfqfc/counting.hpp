#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pcfqfc {

enum class PairStatistics { Thermal, Poisson };

/// Heralded pair source: mean pairs per pulse and the herald arm.
struct SourceModel {
  double mean_pairs_mu = 0.0;
  double eta_herald = 1.0;
  PairStatistics statistics = PairStatistics::Thermal;
  double herald_dark_prob = 0.0; // per pulse
};

enum class ChannelMode { PassThrough, Converted };

/// Loss chain of the signal arm. Pass-through ignores eta_conv.
struct ChannelModel {
  double eta_in = 1.0;
  double eta_conv = 1.0;
  double eta_out = 1.0;
  double eta_det = 1.0;
  ChannelMode mode = ChannelMode::PassThrough;

  /// Probability a signal photon reaches the detector and is absorbed.
  double detection_probability() const;
};

/// Pump-induced fluorescence in the signal detector. Means are detected
/// counts per pulse before any coincidence gating.
struct NoiseModel {
  double mean_per_pulse_ref = 0.0;     // at reference_energy_J
  double reference_energy_J = 6e-9;
  double pump_energy_J = 6e-9;
  std::optional<double> slope_per_J;   // default: proportional to energy
  double lifetime_s = 10e-9;

  double mean_per_pulse() const;
};

/// Times are relative to the arrival of a prompt signal photon.
struct TimingModel {
  double pulse_period_s = 1.0 / 4.71e6;
  double window_s = 1e-9;
  double window_open_s = -0.3e-9;
  double jitter_s = 100e-12;
};

/// Two-element threshold detector on the signal arm.
struct DetectorModel {
  double split_ratio = 0.5;  // fraction routed to element 1
  double dark_rate_Hz = 0.0; // per element
};

struct ExperimentModel {
  SourceModel source;
  ChannelModel channel;
  NoiseModel noise;
  TimingModel timing;
  DetectorModel detector;

  /// Throws DomainError listing every violated invariant.
  void validate() const;
};

/// Raw detection counts. "t" is a click on either detector element; "1", "2"
/// are the elements; a trailing "h" means in coincidence with a herald.
struct TallySet {
  std::uint64_t n_pulses = 0;
  std::uint64_t n_h = 0;
  std::uint64_t n_t = 0;
  std::uint64_t n_th = 0;
  std::uint64_t n_1 = 0;
  std::uint64_t n_2 = 0;
  std::uint64_t n_12 = 0;
  std::uint64_t n_1h = 0;
  std::uint64_t n_2h = 0;
  std::uint64_t n_12h = 0;

  TallySet& operator+=(const TallySet& o);
  bool operator==(const TallySet&) const = default;
  /// Empty string when the count ordering invariants hold, else a message.
  std::string check() const;
};

/// Per-pulse probabilities of the same events as TallySet.
struct ProbabilityTable {
  double p_h = 0.0;
  double p_t = 0.0;
  double p_th = 0.0;
  double p_1 = 0.0;
  double p_2 = 0.0;
  double p_12 = 0.0;
  double p_1h = 0.0;
  double p_2h = 0.0;
  double p_12h = 0.0;
};

/// 1 - exp(-W / tau): share of an exponential fluorescence tail that starts
/// at the window opening and falls inside it.
double window_acceptance(double lifetime_s, double window_s);

/// Probability that a prompt photon (Gaussian jitter) lands in the window.
double prompt_in_window(const TimingModel& timing);

/// Probability that a noise photon (exponential delay plus Gaussian jitter)
/// lands in the window.
double noise_in_window(double lifetime_s, const TimingModel& timing);

/// Exact click probabilities by summing over pair number up to `cutoff`.
/// Throws ConvergenceError if the neglected tail exceeds 1e-12.
ProbabilityTable exact_probabilities(const ExperimentModel& model,
                                     int cutoff = 40);

/// Seeded Monte Carlo of n_pulses. Work is split over `workers` contiguous
/// blocks, each with its own generator seeded from (seed, block index);
/// results depend only on (model, n_pulses, seed, workers).
TallySet simulate_pulses(const ExperimentModel& model, std::uint64_t n_pulses,
                         std::uint64_t seed, int workers = 1);

struct Estimate {
  double value;
  double sigma; // Poissonian error propagation on the counts
};

/// N_th N_pulses / (N_t N_h). Throws UndefinedResult if N_t or N_h is zero.
Estimate r_ca(const TallySet& t);
/// Heralded N_12h N_h / (N_1h N_2h): the herald clicks are the trials.
Estimate heralded_g2(const TallySet& t);
/// N_12 N_pulses / (N_1 N_2).
Estimate unheralded_g2(const TallySet& t);

/// <n(n-1)> / <n>^2 of the pair-number distribution itself: 2 for thermal,
/// 1 for Poisson. Click-based estimators only reach it as detection -> 0.
double photon_number_g2(const SourceModel& source, int cutoff = 400);

double r_ca(const ProbabilityTable& p);
double heralded_g2(const ProbabilityTable& p);
double unheralded_g2(const ProbabilityTable& p);

/// Mean pair number giving the requested heralded g2 (noise as configured).
double solve_mu_for_heralded_g2(ExperimentModel model, double target_g2);
/// Reference noise level giving the requested R_CA.
double solve_noise_for_rca(ExperimentModel model, double target_rca);

struct Histogram {
  double t_min_s;
  double bin_width_s;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;     // all sampled events, including out of range
  std::uint64_t overflow = 0;  // events outside [t_min, t_min + n bin_width)

  double bin_center(std::size_t i) const {
    return t_min_s + (static_cast<double>(i) + 0.5) * bin_width_s;
  }
};

/// Detection times of noise photons over n_pulses pump pulses, histogrammed
/// on [t_min, pulse period).
Histogram noise_histogram(const NoiseModel& noise, const TimingModel& timing,
                          std::uint64_t n_pulses, double bin_width_s,
                          std::uint64_t seed, double t_min_s = -2e-9);

struct LifetimeFit {
  double lifetime_s;
  double sigma_s;
  std::size_t bins_used;
};

/// Weighted straight-line fit of ln(counts) against time over bins starting
/// at fit_start_s with at least min_counts entries.
LifetimeFit fit_tail_lifetime(const Histogram& h, double fit_start_s,
                              std::uint64_t min_counts = 10);

} // namespace pcfqfc
