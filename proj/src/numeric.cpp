#include "pcfqfc/numeric.hpp"

#include "pcfqfc/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pcfqfc::numeric {

namespace {

double central_first(const ScalarFn& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

double central_second(const ScalarFn& f, double x, double h, double fx) {
  return (f(x + h) - 2.0 * fx + f(x - h)) / (h * h);
}

} // namespace

double derivative(const ScalarFn& f, double x, double h) {
  const double coarse = central_first(f, x, h);
  const double fine = central_first(f, x, 0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

double second_derivative(const ScalarFn& f, double x, double h) {
  const double fx = f(x);
  const double d1 = central_second(f, x, h, fx);
  const double d2 = central_second(f, x, 0.5 * h, fx);
  const double d4 = central_second(f, x, 0.25 * h, fx);
  const double r1 = (4.0 * d2 - d1) / 3.0;
  const double r2 = (4.0 * d4 - d2) / 3.0;
  return (16.0 * r2 - r1) / 15.0;
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

RootResult find_root(const ScalarFn& f, double a, double b, double xtol,
                     int max_iter) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return {a, 0};
  if (fb == 0.0) return {b, 0};
  if ((fa < 0.0) == (fb < 0.0)) {
    std::ostringstream msg;
    msg << "root not bracketed on [" << a << ", " << b << "]";
    throw ConvergenceError(msg.str());
  }

  int it = 0;
  bool bisect_next = false;
  while (std::abs(b - a) > xtol && it < max_iter) {
    ++it;
    double m = 0.5 * (a + b);
    // Alternate: a secant proposal is only trusted if it lands well inside
    // the bracket, and never twice in a row.
    if (!bisect_next) {
      const double s = b - fb * (b - a) / (fb - fa);
      const double lo = std::min(a, b), hi = std::max(a, b);
      const double margin = 0.05 * (hi - lo);
      if (std::isfinite(s) && s > lo + margin && s < hi - margin) m = s;
    }
    bisect_next = !bisect_next;
    const double fm = f(m);
    if (fm == 0.0) return {m, it};
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  if (std::abs(b - a) > xtol)
    throw ConvergenceError("root finder hit its iteration cap");
  // Final secant interpolation inside the tight bracket.
  const double s = b - fb * (b - a) / (fb - fa);
  const double lo = std::min(a, b), hi = std::max(a, b);
  return {(std::isfinite(s) && s >= lo && s <= hi) ? s : 0.5 * (a + b), it};
}

std::vector<std::pair<double, double>> sign_changes(const ScalarFn& f, double a,
                                                    double b, int n) {
  std::vector<std::pair<double, double>> out;
  const double step = (b - a) / n;
  double x0 = a;
  double f0 = f(x0);
  for (int i = 1; i <= n; ++i) {
    const double x1 = (i == n) ? b : a + i * step;
    const double f1 = f(x1);
    if ((f0 < 0.0) != (f1 < 0.0)) out.emplace_back(x0, x1);
    x0 = x1;
    f0 = f1;
  }
  return out;
}

MaxResult golden_max(const ScalarFn& f, double a, double b, double xtol,
                     int max_iter) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iter && std::abs(b - a) > xtol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? MaxResult{c, fc} : MaxResult{d, fd};
}

} // namespace pcfqfc::numeric
