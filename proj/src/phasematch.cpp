#include "pcfqfc/phasematch.hpp"

#include "pcfqfc/error.hpp"
#include "pcfqfc/numeric.hpp"
#include "pcfqfc/units.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pcfqfc {

FieldQuartet::FieldQuartet(double omega_s, double omega_p, double omega_q)
    : omega_s_(omega_s), omega_p_(omega_p), omega_q_(omega_q) {
  if (!(omega_s > 0.0 && omega_p > 0.0 && omega_q > 0.0))
    throw DomainError("field frequencies must be positive");
  target_frequency(omega_s, omega_p, omega_q);
}

FieldQuartet FieldQuartet::from_nm(double lambda_s, double lambda_p,
                                   double lambda_q) {
  return {omega_from_nm(lambda_s), omega_from_nm(lambda_p),
          omega_from_nm(lambda_q)};
}

double target_frequency(double omega_s, double omega_p, double omega_q) {
  const double t = omega_s + omega_p - omega_q;
  if (!(t > 0.0))
    throw DomainError("unphysical configuration: target frequency "
                      "omega_s + omega_p - omega_q is not positive");
  return t;
}

double target_wavelength_nm(double lambda_s, double lambda_p, double lambda_q) {
  const double k = 1.0 / lambda_s + 1.0 / lambda_p - 1.0 / lambda_q;
  if (!(k > 0.0))
    throw DomainError("unphysical configuration: target wavenumber is not "
                      "positive");
  return 1.0 / k;
}

double phase_mismatch(const PcfModel& model, const FieldQuartet& f,
                      const FiberGeometry& geom) {
  const auto fiber = model.bind(geom);
  return fiber.beta(f.omega_p()) + fiber.beta(f.omega_s()) -
         fiber.beta(f.omega_q()) - fiber.beta(f.omega_t());
}

QuartetSolution solve_quartet(const PcfModel& model, const FieldQuartet& f,
                              const FiberGeometry& geom) {
  const double db = phase_mismatch(model, f, geom);
  const double s = numeric::sinc(0.5 * db * geom.length_m);
  return {f, db, s * s};
}

double symmetric_partner(double omega, double omega_0) {
  const double p = 2.0 * omega_0 - omega;
  if (!(p > 0.0))
    throw DomainError("symmetric partner frequency is not positive");
  return p;
}

double gv_matched_partner(const PcfModel& model, double omega,
                          const FiberGeometry& geom, WavelengthWindow window) {
  const double omega_0 = zero_dispersion_frequency(model, geom, window);
  if (omega == omega_0)
    throw DomainError("frequency sits on the zero-dispersion point; it has "
                      "no partner");
  const double target = model.beta1(omega, geom);
  auto f = [&](double nm) {
    return model.beta1(omega_from_nm(nm), geom) - target;
  };

  const double zdw_nm = nm_from_omega(omega_0);
  const double lambda_nm = nm_from_omega(omega);
  // Search strictly on the opposite side of the ZDW, keeping clear of it and
  // of the derivative stencil at the window edge.
  const double guard = 0.5;
  double lo, hi;
  if (lambda_nm > zdw_nm) {
    lo = window.min_um * 1e3 * (1.0 + 4.0 * PcfModel::kDefaultStep);
    hi = zdw_nm - guard;
  } else {
    lo = zdw_nm + guard;
    hi = window.max_um * 1e3 * (1.0 - 4.0 * PcfModel::kDefaultStep);
  }
  if (!(hi > lo))
    throw ConvergenceError("no room for a group-velocity partner in window");

  double guess = lo;
  try {
    guess = nm_from_omega(symmetric_partner(omega, omega_0));
  } catch (const DomainError&) {
  }
  guess = std::clamp(guess, lo, hi);

  // Grow a bracket around the symmetric-partner guess until it straddles a
  // sign change or covers the whole side.
  double half = 2.0;
  for (;;) {
    const double a = std::max(lo, guess - half);
    const double b = std::min(hi, guess + half);
    const auto brackets = numeric::sign_changes(f, a, b, 8);
    if (!brackets.empty()) {
      // Nearest bracket to the guess.
      auto best = *std::min_element(
          brackets.begin(), brackets.end(), [&](const auto& x, const auto& y) {
            return std::abs(0.5 * (x.first + x.second) - guess) <
                   std::abs(0.5 * (y.first + y.second) - guess);
          });
      return omega_from_nm(numeric::find_root(f, best.first, best.second, 1e-3).x);
    }
    if (a == lo && b == hi) break;
    half *= 2.0;
  }
  std::ostringstream msg;
  msg << "no group-velocity-matched partner for " << lambda_nm
      << " nm inside [" << lo << ", " << hi << "] nm";
  throw ConvergenceError(msg.str());
}

std::size_t TuningCurve::gap_count() const {
  return static_cast<std::size_t>(std::count_if(
      rows.begin(), rows.end(), [](const TuningRow& r) { return !r.eta; }));
}

TuningCurve tuning_curve(const PcfModel& model, double lambda_s_nm,
                         double lambda_p_nm,
                         const std::vector<double>& lambda_q_grid_nm,
                         const FiberGeometry& geom) {
  model.check(geom);
  if (lambda_q_grid_nm.empty()) throw ConfigError("empty lambda_q grid");
  for (std::size_t i = 1; i < lambda_q_grid_nm.size(); ++i)
    if (!(lambda_q_grid_nm[i] > lambda_q_grid_nm[i - 1]))
      throw ConfigError("lambda_q grid must be strictly increasing");

  TuningCurve curve{lambda_s_nm, lambda_p_nm, geom, {}};
  curve.rows.reserve(lambda_q_grid_nm.size());
  for (double q : lambda_q_grid_nm) {
    TuningRow row{q, std::numeric_limits<double>::quiet_NaN(), {}, {}, {}};
    try {
      row.lambda_t_nm = target_wavelength_nm(lambda_s_nm, lambda_p_nm, q);
      const auto sol = solve_quartet(
          model, FieldQuartet::from_nm(lambda_s_nm, lambda_p_nm, q), geom);
      row.delta_beta_per_m = sol.delta_beta_per_m;
      row.eta = sol.eta_sinc;
    } catch (const Error& e) {
      row.error = e.what();
    }
    curve.rows.push_back(std::move(row));
  }
  return curve;
}

std::vector<double> linear_grid(double lo, double hi, double step) {
  if (!(step > 0.0)) throw ConfigError("grid step must be positive");
  if (hi < lo) throw ConfigError("grid range is reversed");
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
  if (hi - out.back() > 1e-9 * std::max(1.0, std::abs(hi))) out.push_back(hi);
  return out;
}

long independent_bins(double lambda_lo_nm, double lambda_hi_nm,
                      double bin_width_hz) {
  if (!(bin_width_hz > 0.0)) throw ConfigError("bin width must be positive");
  const double span = std::abs(hz_from_nm(lambda_lo_nm) - hz_from_nm(lambda_hi_nm));
  return static_cast<long>(std::floor(span / bin_width_hz));
}

double solve_q_for_target(double lambda_t_nm, double lambda_s_nm,
                          double lambda_p_nm, WavelengthWindow window) {
  const double k = 1.0 / lambda_s_nm + 1.0 / lambda_p_nm - 1.0 / lambda_t_nm;
  const double lo = window.min_um * 1e3, hi = window.max_um * 1e3;
  if (!(k > 0.0) || !(1.0 / k >= lo && 1.0 / k <= hi)) {
    std::ostringstream msg;
    msg << "required lambda_q ";
    if (k > 0.0) msg << "= " << 1.0 / k << " nm ";
    msg << "is outside the valid window [" << lo << ", " << hi << "] nm";
    throw DomainError(msg.str());
  }
  return 1.0 / k;
}

PumpOptimum optimize_p_for_target(const PcfModel& model, double lambda_t_nm,
                                  double lambda_s_nm, const FiberGeometry& geom,
                                  double p_lo_nm, double p_hi_nm,
                                  std::optional<double> reference_lambda_p,
                                  WavelengthWindow window) {
  model.check(geom);
  if (!(p_hi_nm > p_lo_nm))
    throw ConfigError("pump window must have p_lo < p_hi");
  if (p_lo_nm < window.min_um * 1e3 || p_hi_nm > window.max_um * 1e3)
    throw DomainError("pump window extends outside the validity window");

  constexpr double kInvalid = -1.0;
  auto eta_at = [&](double p) {
    try {
      const double q = solve_q_for_target(lambda_t_nm, lambda_s_nm, p, window);
      return solve_quartet(model, FieldQuartet::from_nm(lambda_s_nm, p, q), geom)
          .eta_sinc;
    } catch (const Error&) {
      return kInvalid;
    }
  };

  constexpr int kScan = 201; // odd, so the window centre is a grid point
  const double step = (p_hi_nm - p_lo_nm) / (kScan - 1);
  std::vector<double> xs(kScan), ys(kScan);
  for (int i = 0; i < kScan; ++i) {
    xs[i] = (i == kScan - 1) ? p_hi_nm : p_lo_nm + i * step;
    ys[i] = eta_at(xs[i]);
  }

  struct Candidate {
    double p, eta;
    bool edge;
  };
  std::vector<Candidate> cands;
  for (int i = 0; i < kScan; ++i) {
    if (ys[i] == kInvalid) continue;
    const bool left_ok = i == 0 || ys[i] >= ys[i - 1];
    const bool right_ok = i == kScan - 1 || ys[i] >= ys[i + 1];
    const bool edge = (i == 0 || i == kScan - 1);
    cands.push_back({xs[i], ys[i], edge});
    if (left_ok && right_ok && !edge) {
      const auto m = numeric::golden_max(eta_at, xs[i - 1], xs[i + 1], 1e-6);
      cands.push_back({m.x, m.value, false});
    }
  }
  if (reference_lambda_p && *reference_lambda_p >= p_lo_nm &&
      *reference_lambda_p <= p_hi_nm) {
    const double e = eta_at(*reference_lambda_p);
    if (e != kInvalid) cands.push_back({*reference_lambda_p, e, false});
  }
  if (cands.empty())
    throw DomainError("no pump setting in the window reaches the target inside "
                      "the validity window");

  double best_eta = kInvalid;
  for (const auto& c : cands) best_eta = std::max(best_eta, c.eta);
  const double centre = 0.5 * (p_lo_nm + p_hi_nm);
  const Candidate* pick = nullptr;
  for (const auto& c : cands) {
    if (c.eta < best_eta - 1e-9) continue;
    if (!pick || std::abs(c.p - centre) < std::abs(pick->p - centre)) pick = &c;
  }
  return {pick->p, solve_q_for_target(lambda_t_nm, lambda_s_nm, pick->p, window),
          pick->eta, pick->edge};
}

} // namespace pcfqfc
