// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion,
// preceded by the measured quantities, and exits nonzero if any criterion
// fails.

#include "pcfqfc/config.hpp"
#include "pcfqfc/conversion.hpp"
#include "pcfqfc/counting.hpp"
#include "pcfqfc/dispersion.hpp"
#include "pcfqfc/fit.hpp"
#include "pcfqfc/phasematch.hpp"
#include "pcfqfc/units.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace pcfqfc;

namespace {

const std::string kConfigDir = PCFQFC_TEST_CONFIG_DIR;

constexpr FiberGeometry kNominal{2.11, 0.337, 0.1, 47.0};
constexpr FiberGeometry kFitted{2.1044, 0.3389, 0.1, 47.0};

int failures = 0;

void detail(const char* fmt, auto... args) {
  std::printf("    ");
  std::printf(fmt, args...);
  std::printf("\n");
}

// Runs one criterion, timing it against its budget. The criterion body
// returns whether its value checks passed; the runtime bound is part of it.
void criterion(int id, const char* title, double budget_s,
               const std::function<bool()>& body) {
  std::printf("[%d] %s\n", id, title);
  std::fflush(stdout);
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = body();
  } catch (const std::exception& e) {
    detail("exception: %s", e.what());
  }
  const double dt =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool fast = dt < budget_s;
  detail("runtime %.4g s (budget %.4g s)%s", dt, budget_s, fast ? "" : " EXCEEDED");
  const bool pass = ok && fast;
  if (!pass) ++failures;
  std::printf("%s criterion %d: %s\n\n", pass ? "PASS" : "FAIL", id, title);
  std::fflush(stdout);
}

double z_score(double p, std::uint64_t count, std::uint64_t n) {
  const double N = static_cast<double>(n);
  const double var = N * p * (1.0 - p);
  if (var == 0.0) return count == 0 ? 0.0 : INFINITY;
  return (static_cast<double>(count) - N * p) / std::sqrt(var);
}

} // namespace

int main() {
  const PcfModel model = PcfModel::load();

  criterion(1, "ZDW of the nominal geometry within 1044.7 +- 15 nm", 1.0, [&] {
    const double l0 = nm_from_omega(zero_dispersion_frequency(model, kNominal));
    detail("lambda0 = %.6f nm", l0);
    return std::abs(l0 - 1044.7) <= 15.0;
  });

  criterion(2, "energy conservation (1551, 787, 872.7) -> 1299.5 +- 0.5 nm", 1e-3, [&] {
    const double lt = target_wavelength_nm(1551.0, 787.0, 872.7);
    // Independent route through frequencies.
    const double lt_omega =
        nm_from_omega(target_frequency(omega_from_nm(1551.0), omega_from_nm(787.0),
                                       omega_from_nm(872.7)));
    detail("lambda_t = %.6f nm (via omega: %.6f nm)", lt, lt_omega);
    return std::abs(lt - 1299.5) <= 0.5 && std::abs(lt - lt_omega) < 1e-9;
  });

  criterion(3, "tuning range covers 1226-1408 nm with >= 150 bins of 202 GHz", 10.0, [&] {
    const auto curve = tuning_curve(model, 1551.0, 787.0,
                                    linear_grid(810.0, 910.0, 0.1), kFitted);
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& r : curve.rows) {
      if (!r.eta) continue;
      lo = std::min(lo, r.lambda_t_nm);
      hi = std::max(hi, r.lambda_t_nm);
    }
    const long bins = independent_bins(lo, hi, 202e9);
    detail("%zu rows, %zu gaps; lambda_t in [%.3f, %.3f] nm; %ld bins", curve.rows.size(),
           curve.gap_count(), lo, hi, bins);
    return curve.gap_count() == 0 && lo <= 1226.0 && hi >= 1408.0 && bins >= 150;
  });

  criterion(4, "walk-off p vs q over 810-910 nm <= 0.6 ps at the fitted geometry", 5.0, [&] {
    const double wp = omega_from_nm(787.0);
    double worst = 0.0, at = 0.0;
    for (double q : linear_grid(810.0, 910.0, 0.1)) {
      const double w = std::abs(walkoff(model, wp, omega_from_nm(q), kFitted));
      if (w > worst) {
        worst = w;
        at = q;
      }
    }
    detail("max |walk-off| = %.6f ps at lambda_q = %.1f nm", worst * 1e12, at);
    return worst <= 0.6e-12;
  });

  criterion(5, "conversion formula identities over 1e4 random inputs", 60.0, [&] {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double L = 0.1;
    double worst_phase = 0.0, worst_low = 0.0;
    double lo = INFINITY, hi = -INFINITY;
    for (int i = 0; i < 10000; ++i) {
      const double gamma = 1e-3 + 0.2 * u01(rng);
      const double pp = 500.0 * u01(rng), pq = 500.0 * u01(rng);
      const double db = (u01(rng) - 0.5) * 400.0;
      // Phase matched: sin^2(2 gamma sqrt(PpPq) L).
      const double s = std::sin(2.0 * gamma * std::sqrt(pp * pq) * L);
      worst_phase = std::max(worst_phase,
                             std::abs(eta_bsfwm(gamma, pp, pq, 0.0, L).eta - s * s));
      // Arbitrary inputs stay a probability.
      const double e = eta_bsfwm(gamma, pp, pq, db, L).eta;
      lo = std::min(lo, e);
      hi = std::max(hi, e);
      // Low gain: coupling gamma sqrt(PpPq) L drawn in [1e-4, 1e-2].
      const double g = std::pow(10.0, -4.0 + 2.0 * u01(rng));
      const double pl = g / (gamma * L), ql = pl;
      const double peak = 4.0 * gamma * gamma * pl * ql * L * L;
      const double x = db * L / 2.0;
      const double sinc = x == 0.0 ? 1.0 : std::sin(x) / x;
      const double low = eta_bsfwm(gamma, pl, ql, db, L).eta;
      worst_low = std::max(worst_low, std::abs(low - peak * sinc * sinc) / peak);
    }
    detail("phase-matched max |eta - sin^2| = %.3e", worst_phase);
    detail("low-gain max deviation relative to 4g^2PpPqL^2 = %.3e", worst_low);
    detail("eta range over random inputs [%.6g, %.6g]", lo, hi);
    return worst_phase <= 1e-12 && worst_low <= 1e-3 && lo >= 0.0 && hi <= 1.0;
  });

  criterion(6, "efficiency chain 0.44 x 0.12 x 0.28 within 0.014 +- 0.002", 1e-3, [&] {
    const double total = chain_total({0.44, 0.12, 0.28});
    detail("eta_total = %.6f", total);
    return std::abs(total - 0.014) <= 0.002;
  });

  criterion(7, "fit recovery: 5x5 noiseless grid to 0.1%, 1% noise to 1% over 20 seeds",
            120.0, [&] {
    // Each grid geometry is probed the way the instrument would be: p sits
    // at the group-velocity partner of the 1551 nm signal and q is scanned
    // over 100 nm above it.
    auto context_for = [&](const FiberGeometry& g) {
      const double lp = nm_from_omega(gv_matched_partner(model, omega_from_nm(1551.0), g));
      return std::pair{ScanContext{1551.0, lp, g.length_m},
                       linear_grid(lp + 23.0, lp + 123.0, 2.0)};
    };
    const FitParams guess{2.1, 0.38, 0.5};
    FitBounds bounds;
    double worst = 0.0;
    int misses = 0;
    for (double pitch : {1.9, 2.0, 2.1, 2.2, 2.3}) {
      for (double ratio : {0.35, 0.365, 0.38, 0.395, 0.41}) {
        const FiberGeometry g{pitch, ratio, 0.1, 47.0};
        const auto [ctx, grid] = context_for(g);
        const FitParams truth{pitch, ratio, 0.6};
        const auto obs = synthesize_observations(model, truth, grid, ctx, 0.0, 1);
        const auto r = fit_geometry(model, obs, bounds, guess);
        const double e = std::max(std::abs(r.params.pitch_um / pitch - 1.0),
                                  std::abs(r.params.hole_ratio / ratio - 1.0));
        worst = std::max(worst, e);
        if (e > 1e-3 || !r.converged) {
          ++misses;
          detail("miss at (%.3f, %.3f): got (%.5f, %.5f)", pitch, ratio,
                 r.params.pitch_um, r.params.hole_ratio);
        }
      }
    }
    detail("noiseless grid: worst relative error %.3e, %d of 25 outside 0.1%%", worst, misses);

    const FitParams truth{2.1044, 0.3389, 0.6};
    const ScanContext ctx{1551.0, 787.0, 0.1};
    const auto grid = linear_grid(810.0, 910.0, 2.0);
    double worst_noisy = 0.0;
    int noisy_misses = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto obs = synthesize_observations(model, truth, grid, ctx, 0.01, seed);
      const auto r = fit_geometry(model, obs, bounds, {2.11, 0.337, 0.5});
      const double e = std::max(std::abs(r.params.pitch_um / truth.pitch_um - 1.0),
                                std::abs(r.params.hole_ratio / truth.hole_ratio - 1.0));
      worst_noisy = std::max(worst_noisy, e);
      if (e > 1e-2 || !r.converged) ++noisy_misses;
    }
    detail("1%% noise: worst relative error %.3e, %d of 20 outside 1%%", worst_noisy,
           noisy_misses);
    return misses == 0 && noisy_misses == 0;
  });

  criterion(8, "window acceptance tau = 10 ns, W = 1 ns equals 1 - e^-0.1 to 1e-6", 1e-3, [&] {
    const double w = window_acceptance(10e-9, 1e-9);
    const double analytic = -std::expm1(-0.1);
    detail("window_acceptance = %.9f, analytic %.9f (quoted 0.0952)", w, analytic);
    return std::abs(w - analytic) <= 1e-6 && std::abs(w - 0.0952) < 5e-5;
  });

  criterion(9, "counting statistics: MC vs oracle grid, noise g2, thermal g2, band configs",
            300.0, [&] {
    bool ok = true;
    // 3 x 3 x 3 grid of mean pair number, signal-channel efficiency and noise.
    const std::uint64_t n = 10'000'000;
    double worst_z = 0.0;
    int point = 0, bad_points = 0;
    for (double mu : {0.002, 0.02, 0.2}) {
      for (double eta : {0.01, 0.1, 0.6}) {
        for (double nu : {0.0, 0.05, 0.5}) {
          ExperimentModel m;
          m.source.mean_pairs_mu = mu;
          m.source.eta_herald = 0.25;
          m.channel = {eta, 1.0, 1.0, 1.0, ChannelMode::PassThrough};
          m.noise.mean_per_pulse_ref = nu;
          const auto p = exact_probabilities(m);
          const auto t = simulate_pulses(m, n, 1000 + point);
          ++point;
          if (!t.check().empty()) {
            detail("tally invariant broken: %s", t.check().c_str());
            ok = false;
          }
          const double zs[] = {z_score(p.p_h, t.n_h, n),     z_score(p.p_t, t.n_t, n),
                               z_score(p.p_th, t.n_th, n),   z_score(p.p_1, t.n_1, n),
                               z_score(p.p_2, t.n_2, n),     z_score(p.p_12, t.n_12, n),
                               z_score(p.p_1h, t.n_1h, n),   z_score(p.p_2h, t.n_2h, n),
                               z_score(p.p_12h, t.n_12h, n)};
          double zmax = 0.0;
          for (double z : zs) zmax = std::max(zmax, std::abs(z));
          worst_z = std::max(worst_z, zmax);
          if (zmax > 4.0) {
            ++bad_points;
            detail("(mu %.3g, eta %.3g, nu %.3g): max |z| = %.2f", mu, eta, nu, zmax);
          }
        }
      }
    }
    detail("27-point grid at 1e7 pulses: worst |z| = %.2f, %d points beyond 4 sigma",
           worst_z, bad_points);
    ok = ok && bad_points == 0;

    // Poisson noise alone.
    {
      const auto cfg = load_config(kConfigDir + "/noise_only.json");
      const auto m = resolve_experiment(cfg.require_experiment()).model;
      const auto t = simulate_pulses(m, n, 11);
      const auto g = unheralded_g2(t);
      const double oracle = unheralded_g2(exact_probabilities(m));
      detail("noise-only g2 = %.4f +- %.4f (oracle %.6f)", g.value, g.sigma, oracle);
      ok = ok && std::abs(g.value - 1.0) <= 0.02 && std::abs(oracle - 1.0) <= 0.02;
    }

    // Thermal field, mu = 0.1, lossless.
    {
      SourceModel s;
      s.mean_pairs_mu = 0.1;
      s.statistics = PairStatistics::Thermal;
      const double g = photon_number_g2(s);
      ExperimentModel m;
      m.source = s;
      m.source.eta_herald = 1.0;
      m.channel = {1.0, 1.0, 1.0, 1.0, ChannelMode::PassThrough};
      m.timing.jitter_s = 0.0;
      const double clicks = unheralded_g2(exact_probabilities(m));
      detail("thermal photon-number g2 = %.6f (threshold-click ratio %.4f)", g, clicks);
      ok = ok && std::abs(g - 2.0) <= 0.02;
    }

    // Calibrated band configurations.
    auto band = [&](const char* file, std::uint64_t pulses, std::uint64_t seed,
                    double centre, double half_width) {
      const auto cfg = load_config(kConfigDir + "/" + file);
      const auto m = resolve_experiment(cfg.require_experiment()).model;
      const auto t = simulate_pulses(m, pulses, seed);
      const auto g = heralded_g2(t);
      const auto p = exact_probabilities(m);
      detail("%s: mu %.6g, nu %.6g; heralded g2 = %.4f +- %.4f (oracle %.4f), R_CA = %.2f",
             file, m.source.mean_pairs_mu, m.noise.mean_per_pulse_ref, g.value, g.sigma,
             heralded_g2(p), r_ca(t).value);
      return std::abs(g.value - centre) <= half_width;
    };
    ok = band("input_band.json", 100'000'000, 21, 0.034, 0.016) && ok;
    ok = band("converted_band.json", 5'000'000'000ULL, 22, 0.25, 0.12) && ok;
    return ok;
  });

  criterion(10, "noise histogram tail lifetime 10 ns +- 5% at 1e6 events", 30.0, [&] {
    NoiseModel noise;
    noise.mean_per_pulse_ref = 0.1;
    const TimingModel timing;
    const auto h = noise_histogram(noise, timing, 10'000'000, 0.1e-9, 10);
    const auto fit = fit_tail_lifetime(h, 2e-9);
    detail("%llu events; fitted lifetime %.4f +- %.4f ns over %zu bins",
           static_cast<unsigned long long>(h.total), fit.lifetime_s * 1e9,
           fit.sigma_s * 1e9, fit.bins_used);
    return std::abs(fit.lifetime_s / 10e-9 - 1.0) <= 0.05;
  });

  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
