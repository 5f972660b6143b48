#pragma once

#include <functional>
#include <span>
#include <vector>

namespace pcfqfc {

struct NelderMeadOptions {
  double initial_step = 0.05;
  double diameter_tol = 1e-6;
  int max_iterations = 10000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> best_history; // best-vertex value after each iteration
};

using Objective = std::function<double(std::span<const double>)>;

/// Downhill simplex (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
/// Stops when the largest vertex-to-vertex distance drops below
/// diameter_tol. Non-finite objective values are treated as +infinity, so a
/// penalty of infinity outside a feasible region is allowed.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                             const NelderMeadOptions& opts = {});

} // namespace pcfqfc
