// pcfqfc: command-line front end for PCF frequency-conversion design and
// photon-counting simulation. Lab units at this boundary (nm, ps, nJ, MHz).

#include "pcfqfc/config.hpp"
#include "pcfqfc/conversion.hpp"
#include "pcfqfc/counting.hpp"
#include "pcfqfc/dispersion.hpp"
#include "pcfqfc/error.hpp"
#include "pcfqfc/fit.hpp"
#include "pcfqfc/io.hpp"
#include "pcfqfc/phasematch.hpp"
#include "pcfqfc/units.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

using namespace pcfqfc;
using nlohmann::ordered_json;

namespace {

enum Exit : int {
  kOk = 0,
  kOther = 1,
  kConfig = 2,
  kDomain = 3,
  kConvergence = 4,
  kIo = 5,
  kUndefined = 6,
};

struct Common {
  std::string config_path;
  std::string geometry_override;
  bool json = false;
};

std::vector<double> parse_list(const std::string& text, std::size_t n, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(io::parse_number(cell, what));
  if (out.size() != n)
    throw ConfigError(what + ": expected " + std::to_string(n) + " comma-separated numbers");
  return out;
}

struct Session {
  RunConfig cfg;
  PcfModel model;
};

Session open_session(const Common& c) {
  RunConfig cfg = load_config(c.config_path);
  if (!c.geometry_override.empty()) {
    const auto v = parse_list(c.geometry_override, 2, "--geometry");
    FiberGeometry g = cfg.geometry.value_or(FiberGeometry{0, 0, 0.1, 0});
    g.pitch_um = v[0];
    g.hole_ratio = v[1];
    cfg.geometry = g;
  }
  PcfModel model = PcfModel::load(cfg.sellmeier_path, cfg.coefficients_path);
  if (cfg.geometry) model.check(*cfg.geometry);
  return {std::move(cfg), std::move(model)};
}

std::string out_path(const RunConfig& cfg, const std::string& given, const std::string& name) {
  if (!given.empty()) return given;
  return (std::filesystem::path(cfg.output_dir) / name).string();
}

std::string num(double x) { return io::format_number(x); }

ordered_json geometry_json(const FiberGeometry& g) {
  return {{"pitch_um", io::round9(g.pitch_um)},
          {"hole_ratio", io::round9(g.hole_ratio)},
          {"length_m", io::round9(g.length_m)},
          {"gamma_per_W_km", io::round9(g.gamma_per_W_km)}};
}

std::uint64_t require_seed(const std::optional<std::uint64_t>& cli, const char* cmd) {
  if (!cli) throw ConfigError(std::string(cmd) + " is stochastic: --seed is required");
  return *cli;
}

// ---- zdw ------------------------------------------------------------------

int cmd_zdw(const Common& c) {
  Session s = open_session(c);
  const FiberGeometry& g = s.cfg.require_geometry();
  const double w0 = zero_dispersion_frequency(s.model, g);
  const double l0 = nm_from_omega(w0);
  if (c.json) {
    ordered_json j{{"geometry", geometry_json(g)},
                   {"lambda0_nm", io::round9(l0)},
                   {"omega0_rad_per_s", io::round9(w0)}};
    std::cout << io::dump(j);
  } else {
    std::cout << "geometry: pitch " << num(g.pitch_um) << " um, d/pitch " << num(g.hole_ratio)
              << "\n"
              << "lambda0_nm " << num(l0) << "\nomega0_rad_per_s " << num(w0) << "\n";
  }
  return kOk;
}

// ---- index ----------------------------------------------------------------

int cmd_index(const Common& c, const std::vector<double>& lambdas_nm) {
  Session s = open_session(c);
  const FiberGeometry& g = s.cfg.require_geometry();
  std::cout << "lambda_nm,n_core,n_eff,n_fsm,beta1_ps_per_m,beta2_ps2_per_km\n";
  for (double l : lambdas_nm) {
    const auto m = s.model.mode_indices(l * 1e-3, g);
    const double w = omega_from_nm(l);
    const double b1 = s.model.beta1(w, g) * 1e12;
    const double b2 = s.model.beta2(w, g) * 1e24 * 1e3;
    std::cout << num(l) << ',' << num(m.n_core) << ',' << num(m.n_eff) << ','
              << num(m.n_fsm) << ',' << num(b1) << ',' << num(b2) << '\n';
  }
  return kOk;
}

// ---- tune -----------------------------------------------------------------

struct TuneArgs {
  std::optional<double> lambda_s, lambda_p, step;
  std::string q_range;
  std::string out;
};

int cmd_tune(const Common& c, const TuneArgs& a) {
  Session s = open_session(c);
  const FiberGeometry& g = s.cfg.require_geometry();
  ScanSettings sc = s.cfg.scan;
  if (a.lambda_s) sc.lambda_s_nm = *a.lambda_s;
  if (a.lambda_p) sc.lambda_p_nm = *a.lambda_p;
  if (a.step) sc.lambda_q_step_nm = *a.step;
  if (!a.q_range.empty()) {
    const auto v = parse_list(a.q_range, 2, "--q-range");
    if (v[0] > v[1]) throw ConfigError("--q-range: reversed range");
    sc.lambda_q_min_nm = v[0];
    sc.lambda_q_max_nm = v[1];
  }
  const auto grid = linear_grid(sc.lambda_q_min_nm, sc.lambda_q_max_nm, sc.lambda_q_step_nm);
  const TuningCurve curve = tuning_curve(s.model, sc.lambda_s_nm, sc.lambda_p_nm, grid, g);

  std::ostringstream csv;
  io::write_tuning_csv(csv, curve);
  const std::string path = out_path(s.cfg, a.out, "tuning.csv");
  io::write_text_file(path, csv.str());

  for (const auto& r : curve.rows)
    if (!r.eta) std::cerr << "gap at lambda_q " << num(r.lambda_q_nm) << " nm: " << r.error << "\n";
  if (sc.exclusion_q_nm) {
    const auto [lo, hi] = *sc.exclusion_q_nm;
    const auto n = std::count_if(curve.rows.begin(), curve.rows.end(), [&](const TuningRow& r) {
      return r.lambda_q_nm >= lo && r.lambda_q_nm <= hi;
    });
    if (n > 0)
      std::cerr << "note: " << n << " rows fall in the excluded lambda_q range [" << num(lo)
                << ", " << num(hi) << "] nm\n";
  }
  double tmin = curve.rows.front().lambda_t_nm, tmax = tmin;
  for (const auto& r : curve.rows) {
    tmin = std::min(tmin, r.lambda_t_nm);
    tmax = std::max(tmax, r.lambda_t_nm);
  }
  const long bins = independent_bins(tmin, tmax, sc.bin_width_GHz * 1e9);
  if (c.json) {
    std::cout << io::dump({{"csv", path},
                           {"lambda_t_min_nm", io::round9(tmin)},
                           {"lambda_t_max_nm", io::round9(tmax)},
                           {"bin_width_GHz", io::round9(sc.bin_width_GHz)},
                           {"independent_bins", bins},
                           {"gaps", curve.gap_count()}});
  } else {
    std::cout << "wrote " << path << " (" << curve.rows.size() << " rows, " << curve.gap_count()
              << " gaps)\nlambda_t extent " << num(tmin) << " - " << num(tmax) << " nm\n"
              << "independent bins at " << num(sc.bin_width_GHz) << " GHz: " << bins << "\n";
  }
  return kOk;
}

// ---- match ----------------------------------------------------------------

struct MatchArgs {
  std::optional<double> lambda_s;
  std::optional<double> target_nm;
  std::string p_range = "770,800";
};

int cmd_match(const Common& c, const MatchArgs& a) {
  Session s = open_session(c);
  const FiberGeometry& g = s.cfg.require_geometry();
  const double ls = a.lambda_s.value_or(s.cfg.scan.lambda_s_nm);
  const double w0 = zero_dispersion_frequency(s.model, g);
  const double partner = nm_from_omega(gv_matched_partner(s.model, omega_from_nm(ls), g));
  ordered_json j{{"lambda_s_nm", io::round9(ls)},
                 {"lambda0_nm", io::round9(nm_from_omega(w0))},
                 {"gv_partner_nm", io::round9(partner)}};
  if (a.target_nm) {
    const auto pr = parse_list(a.p_range, 2, "--p-range");
    const PumpOptimum o = optimize_p_for_target(s.model, *a.target_nm, ls, g, pr[0], pr[1],
                                                s.cfg.scan.lambda_p_nm);
    j["target_nm"] = io::round9(*a.target_nm);
    j["lambda_p_nm"] = io::round9(o.lambda_p_nm);
    j["lambda_q_nm"] = io::round9(o.lambda_q_nm);
    j["eta_sinc"] = io::round9(o.eta);
    j["at_boundary"] = o.at_boundary;
  }
  if (c.json) {
    std::cout << io::dump(j);
  } else {
    for (const auto& [k, v] : j.items()) std::cout << k << ' ' << v.dump() << '\n';
  }
  return kOk;
}

// ---- fit / synth ----------------------------------------------------------

ScanContext scan_context(const RunConfig& cfg) {
  return {cfg.scan.lambda_s_nm, cfg.scan.lambda_p_nm, cfg.require_geometry().length_m};
}

int cmd_fit(const Common& c, const std::string& csv_path, const std::string& out) {
  Session s = open_session(c);
  std::istringstream in(io::read_text_file(csv_path));
  const ObservationSet obs = io::read_observations_csv(in, csv_path, scan_context(s.cfg));
  const FitResult r = fit_geometry(s.model, obs, s.cfg.fit.bounds, s.cfg.fit.initial,
                                   s.cfg.fit.options);
  ordered_json j = io::to_json(r);
  j["observations"] = obs.size();
  j["weighted"] = obs.weighted();
  const std::string path = out_path(s.cfg, out, "fit.json");
  io::write_text_file(path, io::dump(j));
  if (c.json) std::cout << io::dump(j);
  else
    std::cout << "pitch_um " << num(r.params.pitch_um) << " +- " << num(r.uncertainty[0])
              << "\nhole_ratio " << num(r.params.hole_ratio) << " +- " << num(r.uncertainty[1])
              << "\nscale " << num(r.params.scale) << " +- " << num(r.uncertainty[2])
              << "\nresidual_sum " << num(r.residual_sum) << "\nconverged "
              << (r.converged ? "true" : "false") << "\nwrote " << path << "\n";
  if (!r.converged) {
    std::cerr << "fit did not converge; result written with converged = false\n";
    return kConvergence;
  }
  return kOk;
}

struct SynthArgs {
  std::string truth;
  double noise = 0.0;
  double step = 2.0;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_synth(const Common& c, const SynthArgs& a) {
  Session s = open_session(c);
  const std::uint64_t seed = require_seed(a.seed, "synth");
  FitParams truth{s.cfg.require_geometry().pitch_um, s.cfg.require_geometry().hole_ratio, 1.0};
  if (!a.truth.empty()) {
    const auto v = parse_list(a.truth, 3, "--truth");
    truth = {v[0], v[1], v[2]};
  }
  const auto grid = linear_grid(s.cfg.scan.lambda_q_min_nm, s.cfg.scan.lambda_q_max_nm, a.step);
  const ObservationSet obs =
      synthesize_observations(s.model, truth, grid, scan_context(s.cfg), a.noise, seed);
  std::ostringstream csv;
  io::write_observations_csv(csv, obs);
  const std::string path = out_path(s.cfg, a.out, "observations.csv");
  io::write_text_file(path, csv.str());
  std::cout << "wrote " << path << " (" << obs.size() << " rows)\n";
  return kOk;
}

// ---- simulate -------------------------------------------------------------

struct SimArgs {
  std::optional<std::uint64_t> seed;
  double pulses = 1e7;
  int workers = 1;
  std::string out_dir;
};

int cmd_simulate(const Common& c, const SimArgs& a) {
  const RunConfig cfg = load_config(c.config_path);
  const std::uint64_t seed = require_seed(a.seed, "simulate");
  if (!(a.pulses >= 1 && a.pulses <= 1e15)) throw ConfigError("--pulses must be in [1, 1e15]");
  const auto n_pulses = static_cast<std::uint64_t>(std::llround(a.pulses));
  const ResolvedExperiment ex = resolve_experiment(cfg.require_experiment());
  const ExperimentModel& m = ex.model;

  const ProbabilityTable p = exact_probabilities(m);
  const TallySet t = simulate_pulses(m, n_pulses, seed, a.workers);

  const double n = static_cast<double>(t.n_pulses);
  auto zscore = [&](double prob, std::uint64_t count) {
    const double var = n * prob * (1.0 - prob);
    if (var <= 0.0) return static_cast<double>(count) == n * prob ? 0.0 : INFINITY;
    return (static_cast<double>(count) - n * prob) / std::sqrt(var);
  };
  const std::array<std::pair<const char*, double>, 9> z{{
      {"P_h", zscore(p.p_h, t.n_h)},     {"P_t", zscore(p.p_t, t.n_t)},
      {"P_th", zscore(p.p_th, t.n_th)},  {"P_1", zscore(p.p_1, t.n_1)},
      {"P_2", zscore(p.p_2, t.n_2)},     {"P_12", zscore(p.p_12, t.n_12)},
      {"P_1h", zscore(p.p_1h, t.n_1h)},  {"P_2h", zscore(p.p_2h, t.n_2h)},
      {"P_12h", zscore(p.p_12h, t.n_12h)}}};
  bool agree = true;
  ordered_json zj;
  for (const auto& [k, v] : z) {
    zj[k] = io::round9(v);
    if (!(std::abs(v) <= 4.0)) agree = false;
  }

  auto metric = [](auto mc, auto oracle) {
    ordered_json j;
    try {
      const Estimate e = mc();
      j["mc"] = io::round9(e.value);
      j["mc_sigma"] = io::round9(e.sigma);
    } catch (const UndefinedResult&) {
      j["mc"] = nullptr;
    }
    try {
      j["oracle"] = io::round9(oracle());
    } catch (const UndefinedResult&) {
      j["oracle"] = nullptr;
    }
    return j;
  };
  ordered_json j;
  j["seed"] = seed;
  j["workers"] = a.workers;
  j["mu"] = io::round9(m.source.mean_pairs_mu);
  j["mu_solved"] = ex.mu_solved;
  j["nu_ref"] = io::round9(m.noise.mean_per_pulse_ref);
  j["nu_solved"] = ex.nu_solved;
  j["nu_at_pump"] = io::round9(m.noise.mean_per_pulse());
  j["R_CA"] = metric([&] { return r_ca(t); }, [&] { return r_ca(p); });
  j["g2_heralded"] = metric([&] { return heralded_g2(t); }, [&] { return heralded_g2(p); });
  j["g2_unheralded"] = metric([&] { return unheralded_g2(t); }, [&] { return unheralded_g2(p); });
  j["oracle_probabilities"] = io::to_json(p);
  j["tallies"] = io::to_json(t);
  j["z_scores"] = zj;
  j["oracle_agreement"] = agree;

  const std::string dir = a.out_dir.empty() ? cfg.output_dir : a.out_dir;
  const auto base = std::filesystem::path(dir);
  io::write_text_file((base / "metrics.json").string(), io::dump(j));
  std::ostringstream csv;
  io::write_tallies_csv(csv, t);
  io::write_text_file((base / "tallies.csv").string(), csv.str());
  std::cout << io::dump(j);
  if (!agree) std::cerr << "warning: Monte Carlo and oracle differ by more than 4 sigma\n";
  return kOk;
}

// ---- noise-hist -----------------------------------------------------------

struct HistArgs {
  std::optional<std::uint64_t> seed;
  double pulses = 1e7;
  double bin_ps = 500.0;
  double fit_start_ns = 2.0;
  std::string out;
};

int cmd_noise_hist(const Common& c, const HistArgs& a) {
  const RunConfig cfg = load_config(c.config_path);
  const std::uint64_t seed = require_seed(a.seed, "noise-hist");
  if (!(a.pulses >= 1 && a.pulses <= 1e13)) throw ConfigError("--pulses must be in [1, 1e13]");
  const ResolvedExperiment ex = resolve_experiment(cfg.require_experiment());
  const Histogram h = noise_histogram(ex.model.noise, ex.model.timing,
                                      static_cast<std::uint64_t>(std::llround(a.pulses)),
                                      a.bin_ps * 1e-12, seed);
  std::ostringstream csv;
  io::write_histogram_csv(csv, h);
  const std::string path = out_path(cfg, a.out, "noise_histogram.csv");
  io::write_text_file(path, csv.str());
  ordered_json j{{"csv", path}, {"events", h.total}, {"out_of_range", h.overflow}};
  if (h.total > 0) {
    const LifetimeFit f = fit_tail_lifetime(h, a.fit_start_ns * 1e-9);
    j["lifetime_ns"] = io::round9(f.lifetime_s * 1e9);
    j["lifetime_sigma_ns"] = io::round9(f.sigma_s * 1e9);
    j["bins_fitted"] = f.bins_used;
  }
  std::cout << io::dump(j);
  return kOk;
}

// ---- power-scan / chain ---------------------------------------------------

int cmd_power_scan(const Common& c, double lambda_q, int points, const std::string& out) {
  Session s = open_session(c);
  const FiberGeometry& g = s.cfg.require_geometry();
  if (!s.cfg.pumps) throw ConfigError("power-scan needs a pumps section");
  if (points < 2) throw ConfigError("--points must be at least 2");
  const double pp = peak_power(s.cfg.pumps->p);
  const double pq = peak_power(s.cfg.pumps->q);
  const auto f = FieldQuartet::from_nm(s.cfg.scan.lambda_s_nm, s.cfg.scan.lambda_p_nm, lambda_q);
  const double db = phase_mismatch(s.model, f, g);
  std::vector<double> grid;
  for (int i = 0; i < points; ++i) grid.push_back(2.0 * pp * i / (points - 1));
  const auto scan = power_scan(g.gamma_per_W_m(), pq, grid, db, g.length_m);
  std::ostringstream csv;
  io::write_power_scan_csv(csv, scan);
  const std::string path = out_path(s.cfg, out, "power_scan.csv");
  io::write_text_file(path, csv.str());
  std::cout << "wrote " << path << "\npeak powers P_p " << num(pp) << " W, P_q " << num(pq)
            << " W\ndelta_beta " << num(db) << " /m\n";
  return kOk;
}

int cmd_chain(const EfficiencyChain& chain) {
  std::cout << io::dump(io::to_json(chain));
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Design and simulation tools for tunable frequency conversion in photonic crystal fiber"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "pcfqfc 1.0.0");

  Common common;
  auto add_common = [&](CLI::App* sub, bool needs_config = true) {
    auto* o = sub->add_option("-c,--config", common.config_path, "run configuration (JSON)");
    if (needs_config) o->required()->check(CLI::ExistingFile);
    sub->add_flag("--json", common.json, "machine-readable output");
  };
  auto add_geometry = [&](CLI::App* sub) {
    sub->add_option("--geometry", common.geometry_override, "override PITCH_UM,HOLE_RATIO");
  };

  int rc = kOk;

  auto* zdw = app.add_subcommand("zdw", "zero-dispersion wavelength of the configured fiber");
  add_common(zdw);
  add_geometry(zdw);
  zdw->callback([&] { rc = cmd_zdw(common); });

  std::vector<double> index_nm;
  auto* idx = app.add_subcommand("index", "mode indices and dispersion at given wavelengths");
  add_common(idx);
  add_geometry(idx);
  idx->add_option("lambda_nm", index_nm, "wavelengths in nm")->required();
  idx->callback([&] { rc = cmd_index(common, index_nm); });

  TuneArgs tune_args;
  auto* tune = app.add_subcommand("tune", "target wavelength and phase matching across a pump-q scan");
  add_common(tune);
  add_geometry(tune);
  tune->add_option("--lambda-s", tune_args.lambda_s, "signal wavelength, nm");
  tune->add_option("--lambda-p", tune_args.lambda_p, "pump p wavelength, nm");
  tune->add_option("--q-range", tune_args.q_range, "LO,HI pump q range, nm");
  tune->add_option("--step", tune_args.step, "pump q step, nm");
  tune->add_option("-o,--out", tune_args.out, "CSV output path");
  tune->callback([&] { rc = cmd_tune(common, tune_args); });

  MatchArgs match_args;
  auto* match = app.add_subcommand("match", "group-velocity partner and pump optimisation");
  add_common(match);
  add_geometry(match);
  match->add_option("--lambda-s", match_args.lambda_s, "signal wavelength, nm");
  match->add_option("--target", match_args.target_nm, "target wavelength to optimise for, nm");
  match->add_option("--p-range", match_args.p_range, "LO,HI pump p search range, nm");
  match->callback([&] { rc = cmd_match(common, match_args); });

  std::string fit_csv, fit_out;
  auto* fit = app.add_subcommand("fit", "fit pitch and hole ratio to a depletion scan");
  add_common(fit);
  fit->add_option("observations", fit_csv, "CSV lambda_q_nm,depletion[,sigma]")
      ->required()
      ->check(CLI::ExistingFile);
  fit->add_option("-o,--out", fit_out, "JSON output path");
  fit->callback([&] { rc = cmd_fit(common, fit_csv, fit_out); });

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "synthetic depletion scan from the model");
  add_common(synth);
  add_geometry(synth);
  synth->add_option("--truth", synth_args.truth, "PITCH_UM,HOLE_RATIO,SCALE");
  synth->add_option("--noise", synth_args.noise, "absolute Gaussian noise on depletion");
  synth->add_option("--step", synth_args.step, "pump q step, nm");
  synth->add_option("--seed", synth_args.seed, "random seed (required)");
  synth->add_option("-o,--out", synth_args.out, "CSV output path");
  synth->callback([&] { rc = cmd_synth(common, synth_args); });

  SimArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "photon-counting Monte Carlo with exact oracle");
  add_common(sim);
  sim->add_option("--seed", sim_args.seed, "random seed (required)");
  sim->add_option("--pulses", sim_args.pulses, "number of pump pulses");
  sim->add_option("--workers", sim_args.workers, "worker threads (part of the seed)")
      ->check(CLI::Range(1, 256));
  sim->add_option("--out-dir", sim_args.out_dir, "directory for metrics.json and tallies.csv");
  sim->callback([&] { rc = cmd_simulate(common, sim_args); });

  HistArgs hist_args;
  auto* hist = app.add_subcommand("noise-hist", "histogram of noise detection times");
  add_common(hist);
  hist->add_option("--seed", hist_args.seed, "random seed (required)");
  hist->add_option("--pulses", hist_args.pulses, "number of pump pulses");
  hist->add_option("--bin-ps", hist_args.bin_ps, "bin width, ps");
  hist->add_option("--fit-start-ns", hist_args.fit_start_ns, "start of the lifetime fit, ns");
  hist->add_option("-o,--out", hist_args.out, "CSV output path");
  hist->callback([&] { rc = cmd_noise_hist(common, hist_args); });

  double scan_q = 872.7;
  int scan_points = 101;
  std::string scan_out;
  auto* pscan = app.add_subcommand("power-scan", "conversion efficiency against pump p power");
  add_common(pscan);
  add_geometry(pscan);
  pscan->add_option("--lambda-q", scan_q, "pump q wavelength, nm");
  pscan->add_option("--points", scan_points, "grid points from 0 to twice the configured P_p");
  pscan->add_option("-o,--out", scan_out, "CSV output path");
  pscan->callback([&] { rc = cmd_power_scan(common, scan_q, scan_points, scan_out); });

  EfficiencyChain chain{0.44, 0.12, 0.28};
  auto* ch = app.add_subcommand("chain", "end-to-end efficiency from its three factors");
  ch->add_option("--eta-in", chain.eta_in, "coupling into the fiber");
  ch->add_option("--eta-internal", chain.eta_internal, "internal conversion");
  ch->add_option("--eta-out", chain.eta_out, "collection after the fiber");
  ch->callback([&] { rc = cmd_chain(chain); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return kConvergence;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const UndefinedResult& e) {
    std::cerr << "undefined result: " << e.what() << "\n";
    return kUndefined;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  return rc;
}
