#include "pcfqfc/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pcfqfc {

namespace {

double eval(const Objective& f, const std::vector<double>& x) {
  const double v = f(x);
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

double diameter(const std::vector<std::vector<double>>& simplex) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < simplex.size(); ++i)
    for (std::size_t j = i + 1; j < simplex.size(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < simplex[i].size(); ++k) {
        const double d = simplex[i][k] - simplex[j][k];
        s += d * d;
      }
      d2 = std::max(d2, s);
    }
  return std::sqrt(d2);
}

} // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                             const NelderMeadOptions& opts) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += opts.initial_step;
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) values[i] = eval(f, simplex[i]);

  std::vector<std::size_t> order(n + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return values[a] < values[b]; });
    std::vector<std::vector<double>> s(n + 1);
    std::vector<double> v(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      s[i] = std::move(simplex[order[i]]);
      v[i] = values[order[i]];
    }
    simplex = std::move(s);
    values = std::move(v);
  };

  auto along = [&](const std::vector<double>& c, const std::vector<double>& w,
                   double t) {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = c[k] + t * (w[k] - c[k]);
    return out;
  };

  NelderMeadResult res;
  sort_simplex();
  while (res.iterations < opts.max_iterations) {
    if (diameter(simplex) < opts.diameter_tol) {
      res.converged = true;
      break;
    }
    ++res.iterations;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / n;
    const auto& worst = simplex[n];

    const auto xr = along(centroid, worst, -1.0);
    const double fr = eval(f, xr);
    if (fr < values[0]) {
      const auto xe = along(centroid, worst, -2.0);
      const double fe = eval(f, xe);
      if (fe < fr) {
        simplex[n] = xe;
        values[n] = fe;
      } else {
        simplex[n] = xr;
        values[n] = fr;
      }
    } else if (fr < values[n - 1]) {
      simplex[n] = xr;
      values[n] = fr;
    } else {
      // Outside contraction if the reflection beat the worst, inside otherwise.
      const bool outside = fr < values[n];
      const auto xc = along(centroid, worst, outside ? -0.5 : 0.5);
      const double fc = eval(f, xc);
      if (fc < (outside ? fr : values[n])) {
        simplex[n] = xc;
        values[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          simplex[i] = along(simplex[0], simplex[i], 0.5);
          values[i] = eval(f, simplex[i]);
        }
      }
    }
    sort_simplex();
    res.best_history.push_back(values[0]);
  }
  if (!res.converged && diameter(simplex) < opts.diameter_tol)
    res.converged = true;
  res.x = simplex[0];
  res.value = values[0];
  return res;
}

} // namespace pcfqfc
