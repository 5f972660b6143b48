#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace pcfqfc::numeric {

using ScalarFn = std::function<double(double)>;

/// Central first derivative with one Richardson step: combines the h and h/2
/// estimates to cancel the O(h^2) term.
double derivative(const ScalarFn& f, double x, double h);

/// Central second derivative with two Richardson levels (h, h/2, h/4), so the
/// error is O(h^6) and a wider step can be used to keep rounding down.
double second_derivative(const ScalarFn& f, double x, double h);

/// sin(x)/x with the removable singularity filled in.
double sinc(double x);

struct RootResult {
  double x = 0.0;
  int iterations = 0;
};

/// Root of f on [a, b] where f(a) and f(b) differ in sign. Bisection shrinks
/// the bracket, secant steps are taken when they land inside it. Stops when
/// the bracket is narrower than xtol. Throws ConvergenceError when the ends
/// do not bracket a sign change.
RootResult find_root(const ScalarFn& f, double a, double b, double xtol,
                     int max_iter = 200);

/// Scan [a, b] with n equal steps and return every sub-interval across which
/// f changes sign, ordered by position.
std::vector<std::pair<double, double>> sign_changes(const ScalarFn& f, double a,
                                                    double b, int n);

struct MaxResult {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section maximisation of a unimodal f on [a, b].
MaxResult golden_max(const ScalarFn& f, double a, double b, double xtol,
                     int max_iter = 200);

} // namespace pcfqfc::numeric
