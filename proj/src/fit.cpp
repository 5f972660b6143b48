#include "pcfqfc/fit.hpp"

#include "pcfqfc/error.hpp"
#include "pcfqfc/numeric.hpp"
#include "pcfqfc/phasematch.hpp"
#include "pcfqfc/units.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <sstream>

namespace pcfqfc {

ObservationSet::ObservationSet(std::vector<Observation> rows, ScanContext context,
                               bool weighted)
    : rows_(std::move(rows)), context_(context), weighted_(weighted) {
  if (rows_.size() < 4)
    throw ConfigError("need at least 4 observations to fit 3 parameters, got " +
                      std::to_string(rows_.size()));
  std::sort(rows_.begin(), rows_.end(), [](const auto& a, const auto& b) {
    return a.lambda_q_nm < b.lambda_q_nm;
  });
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& r = rows_[i];
    if (i > 0 && !(r.lambda_q_nm > rows_[i - 1].lambda_q_nm))
      throw ConfigError("duplicate lambda_q in observations: " +
                        std::to_string(r.lambda_q_nm));
    if (!(r.sigma > 0.0)) throw ConfigError("observation sigma must be positive");
    if (!(r.depletion >= 0.0 && r.depletion <= 1.0))
      throw ConfigError("depletion fraction must lie in [0, 1]");
  }
  if (!(context_.length_m > 0.0 && context_.lambda_s_nm > 0.0 &&
        context_.lambda_p_nm > 0.0))
    throw ConfigError("scan context needs positive wavelengths and length");
}

bool FitBounds::contains(const FitParams& p) const {
  return p.pitch_um >= pitch_um[0] && p.pitch_um <= pitch_um[1] &&
         p.hole_ratio >= hole_ratio[0] && p.hole_ratio <= hole_ratio[1] &&
         p.scale >= scale[0] && p.scale <= scale[1];
}

namespace {

FiberGeometry geometry_of(const FitParams& p, const ScanContext& ctx) {
  return {p.pitch_um, p.hole_ratio, ctx.length_m, 0.0};
}

std::array<double, 3> to_scaled(const FitParams& p, const FitBounds& b) {
  return {(p.pitch_um - b.pitch_um[0]) / (b.pitch_um[1] - b.pitch_um[0]),
          (p.hole_ratio - b.hole_ratio[0]) / (b.hole_ratio[1] - b.hole_ratio[0]),
          (p.scale - b.scale[0]) / (b.scale[1] - b.scale[0])};
}

FitParams from_scaled(std::span<const double> u, const FitBounds& b) {
  return {b.pitch_um[0] + u[0] * (b.pitch_um[1] - b.pitch_um[0]),
          b.hole_ratio[0] + u[1] * (b.hole_ratio[1] - b.hole_ratio[0]),
          b.scale[0] + u[2] * (b.scale[1] - b.scale[0])};
}

} // namespace

std::vector<double> model_depletion_curve(const PcfModel& model,
                                          const std::vector<double>& lambda_q_nm,
                                          const FitParams& params,
                                          const ScanContext& ctx) {
  const auto fiber = model.bind(geometry_of(params, ctx));
  const double ws = omega_from_nm(ctx.lambda_s_nm);
  const double wp = omega_from_nm(ctx.lambda_p_nm);
  const double fixed = fiber.beta(ws) + fiber.beta(wp);
  std::vector<double> out;
  out.reserve(lambda_q_nm.size());
  for (double q : lambda_q_nm) {
    const double wq = omega_from_nm(q);
    const double wt = target_frequency(ws, wp, wq);
    const double db = fixed - fiber.beta(wq) - fiber.beta(wt);
    const double s = numeric::sinc(0.5 * db * ctx.length_m);
    out.push_back(params.scale * s * s);
  }
  return out;
}

double model_depletion(const PcfModel& model, double lambda_q_nm,
                       const FitParams& params, const ScanContext& ctx) {
  return model_depletion_curve(model, {lambda_q_nm}, params, ctx).front();
}

double weighted_ssr(const PcfModel& model, const ObservationSet& obs,
                    const FitParams& params) {
  std::vector<double> grid;
  grid.reserve(obs.size());
  for (const auto& r : obs.rows()) grid.push_back(r.lambda_q_nm);
  const auto m = model_depletion_curve(model, grid, params, obs.context());
  double ssr = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double z = (obs.rows()[i].depletion - m[i]) / obs.rows()[i].sigma;
    ssr += z * z;
  }
  return ssr;
}

namespace {

std::array<double, 3> curvature_uncertainty(const PcfModel& model,
                                            const ObservationSet& obs,
                                            const FitParams& best,
                                            const FitBounds& bounds) {
  const std::array<double, 3> h{
      1e-5 * (bounds.pitch_um[1] - bounds.pitch_um[0]),
      1e-5 * (bounds.hole_ratio[1] - bounds.hole_ratio[0]),
      1e-5 * (bounds.scale[1] - bounds.scale[0])};
  auto chi2 = [&](std::array<double, 3> d) {
    try {
      return weighted_ssr(model, obs,
                          {best.pitch_um + d[0], best.hole_ratio + d[1],
                           best.scale + d[2]});
    } catch (const Error&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  Eigen::Matrix3d hess;
  const double f0 = chi2({0, 0, 0});
  for (int i = 0; i < 3; ++i) {
    std::array<double, 3> e{};
    e[i] = h[i];
    std::array<double, 3> me{};
    me[i] = -h[i];
    hess(i, i) = (chi2(e) - 2.0 * f0 + chi2(me)) / (h[i] * h[i]);
    for (int j = i + 1; j < 3; ++j) {
      std::array<double, 3> pp{}, pm{}, mp{}, mm{};
      pp[i] = h[i], pp[j] = h[j];
      pm[i] = h[i], pm[j] = -h[j];
      mp[i] = -h[i], mp[j] = h[j];
      mm[i] = -h[i], mm[j] = -h[j];
      hess(i, j) = hess(j, i) =
          (chi2(pp) - chi2(pm) - chi2(mp) + chi2(mm)) / (4.0 * h[i] * h[j]);
    }
  }
  std::array<double, 3> out;
  out.fill(std::numeric_limits<double>::quiet_NaN());
  Eigen::FullPivLU<Eigen::Matrix3d> lu(hess);
  if (!hess.allFinite() || !lu.isInvertible()) return out;
  Eigen::Matrix3d cov = 2.0 * lu.inverse();
  if (!obs.weighted() && obs.size() > 3)
    cov *= f0 / static_cast<double>(obs.size() - 3);
  for (int i = 0; i < 3; ++i)
    if (cov(i, i) > 0.0) out[i] = std::sqrt(cov(i, i));
  return out;
}

// Coarse (pitch, d/pitch) grid with the scale solved by weighted linear least
// squares and clipped to its bounds. Returns up to `count` grid-local minima
// in scaled coordinates, best first.
std::vector<std::array<double, 3>> prescan(const PcfModel& model,
                                           const ObservationSet& obs,
                                           const FitBounds& bounds, int n_pitch,
                                           int n_ratio, std::size_t count) {
  std::vector<double> grid;
  for (const auto& r : obs.rows()) grid.push_back(r.lambda_q_nm);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> ssr(static_cast<std::size_t>(n_pitch * n_ratio), inf);
  std::vector<double> scale_u(ssr.size(), 0.5);
  auto at = [&](int i, int j) { return static_cast<std::size_t>(i * n_ratio + j); };
  auto cell = [&](int i, int j) {
    return std::array<double, 2>{(i + 0.5) / n_pitch, (j + 0.5) / n_ratio};
  };

  for (int i = 0; i < n_pitch; ++i)
    for (int j = 0; j < n_ratio; ++j) {
      const auto c = cell(i, j);
      const std::array<double, 3> u{c[0], c[1], 1.0};
      const FitParams p = from_scaled(u, bounds);
      std::vector<double> shape;
      try {
        shape = model_depletion_curve(model, grid, {p.pitch_um, p.hole_ratio, 1.0},
                                      obs.context());
      } catch (const Error&) {
        continue;
      }
      double sxy = 0.0, sxx = 0.0;
      for (std::size_t k = 0; k < shape.size(); ++k) {
        const double w = 1.0 / (obs.rows()[k].sigma * obs.rows()[k].sigma);
        sxy += w * shape[k] * obs.rows()[k].depletion;
        sxx += w * shape[k] * shape[k];
      }
      const double scale = std::clamp(sxx > 0.0 ? sxy / sxx : 0.0,
                                      bounds.scale[0], bounds.scale[1]);
      double total = 0.0;
      for (std::size_t k = 0; k < shape.size(); ++k) {
        const double z = (obs.rows()[k].depletion - scale * shape[k]) /
                         obs.rows()[k].sigma;
        total += z * z;
      }
      ssr[at(i, j)] = total;
      scale_u[at(i, j)] =
          (scale - bounds.scale[0]) / (bounds.scale[1] - bounds.scale[0]);
    }

  struct Min {
    double ssr;
    std::array<double, 3> u;
  };
  std::vector<Min> minima;
  for (int i = 0; i < n_pitch; ++i)
    for (int j = 0; j < n_ratio; ++j) {
      const double v = ssr[at(i, j)];
      if (v == inf) continue;
      bool local = true;
      for (int di = -1; di <= 1 && local; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          const int ii = i + di, jj = j + dj;
          if ((di || dj) && ii >= 0 && jj >= 0 && ii < n_pitch && jj < n_ratio &&
              ssr[at(ii, jj)] < v) {
            local = false;
            break;
          }
        }
      if (!local) continue;
      const auto c = cell(i, j);
      minima.push_back({v, {c[0], c[1], scale_u[at(i, j)]}});
    }
  std::stable_sort(minima.begin(), minima.end(),
                   [](const Min& a, const Min& b) { return a.ssr < b.ssr; });
  std::vector<std::array<double, 3>> out;
  for (const auto& m : minima) {
    if (out.size() == count) break;
    auto u = m.u;
    for (auto& v : u) v = std::clamp(v, 1e-3, 1.0 - 1e-3);
    out.push_back(u);
  }
  return out;
}

} // namespace

FitResult fit_geometry(const PcfModel& model, const ObservationSet& obs,
                       const FitBounds& bounds, const FitParams& initial_guess,
                       const FitOptions& options) {
  if (!bounds.contains(initial_guess))
    throw DomainError("initial guess lies outside the fit bounds");
  if (options.restarts < 1) throw ConfigError("need at least one fit restart");

  const Objective objective = [&](std::span<const double> u) {
    for (double v : u)
      if (v < 0.0 || v > 1.0) return std::numeric_limits<double>::infinity();
    try {
      return weighted_ssr(model, obs, from_scaled(u, bounds));
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  const auto u0 = to_scaled(initial_guess, bounds);
  std::vector<std::array<double, 3>> seeds;
  if (options.prescan_pitch > 0 && options.prescan_ratio > 0)
    seeds = prescan(model, obs, bounds, options.prescan_pitch,
                    options.prescan_ratio,
                    static_cast<std::size_t>(options.restarts - 1));
  std::vector<std::vector<double>> starts;
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> jitter(0.0, options.jitter);
  for (int k = 0; k < options.restarts; ++k) {
    const auto idx = static_cast<std::size_t>(k - 1);
    const bool from_scan = k > 0 && idx < seeds.size();
    const auto& base = from_scan ? seeds[idx] : u0;
    std::vector<double> s(base.begin(), base.end());
    // Scan seeds are used as-is; fallback restarts are jittered.
    if (k > 0 && !from_scan)
      for (auto& v : s) v = std::clamp(v + jitter(rng), 1e-3, 1.0 - 1e-3);
    starts.push_back(std::move(s));
  }

  std::vector<std::future<NelderMeadResult>> runs;
  for (const auto& s : starts)
    runs.push_back(std::async(std::launch::async, [&, s] {
      return nelder_mead(objective, s, options.simplex);
    }));

  FitResult result;
  const NelderMeadResult* best = nullptr;
  std::vector<NelderMeadResult> done;
  done.reserve(runs.size());
  for (auto& r : runs) done.push_back(r.get());
  for (std::size_t k = 0; k < done.size(); ++k) {
    result.total_iterations += done[k].iterations;
    if (!best || done[k].value < best->value) {
      best = &done[k];
      result.winning_restart = static_cast<int>(k);
    }
  }

  result.params = from_scaled(best->x, bounds);
  result.residual_sum = best->value;
  result.iterations = best->iterations;
  result.converged = best->converged;
  result.best_history = best->best_history;
  result.uncertainty = curvature_uncertainty(model, obs, result.params, bounds);
  return result;
}

ObservationSet synthesize_observations(const PcfModel& model,
                                       const FitParams& params,
                                       const std::vector<double>& lambda_q_grid,
                                       const ScanContext& context,
                                       double noise_sigma, std::uint64_t seed) {
  if (!(noise_sigma >= 0.0)) throw ConfigError("noise sigma must be >= 0");
  const auto clean = model_depletion_curve(model, lambda_q_grid, params, context);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<Observation> rows;
  rows.reserve(clean.size());
  for (std::size_t i = 0; i < clean.size(); ++i) {
    double y = clean[i];
    if (noise_sigma > 0.0) y = std::clamp(y + noise_sigma * noise(rng), 0.0, 1.0);
    rows.push_back({lambda_q_grid[i], y, noise_sigma > 0.0 ? noise_sigma : 1.0});
  }
  return ObservationSet(std::move(rows), context, noise_sigma > 0.0);
}

} // namespace pcfqfc
