#pragma once
// Independent re-implementation of the fiber model for cross-checks. Constants
// are typed in here rather than read from the data files, and everything is
// templated so complex-step differentiation gives derivatives without
// finite-difference error.

#include <array>
#include <cmath>
#include <complex>

namespace oracle {

using LD = long double;
using CLD = std::complex<long double>;

inline constexpr LD kC = 299792458.0L;
inline constexpr LD kPi = 3.141592653589793238462643383279502884L;

// Malitson fused silica: B_i, lambda_i (um).
inline constexpr std::array<LD, 3> kB{0.6961663L, 0.4079426L, 0.8974794L};
inline constexpr std::array<LD, 3> kL{0.0684043L, 0.1162414L, 9.896161L};

template <class T>
T silica_index(T lambda_um) {
  T l2 = lambda_um * lambda_um;
  T n2 = T(1);
  for (int i = 0; i < 3; ++i) n2 += kB[i] * l2 / (l2 - kL[i] * kL[i]);
  return std::sqrt(n2);
}

// Empirical V/W tables: rows j = 0..3, columns i = 1..4.
inline constexpr LD a_coef[4][4] = {{0.54808L, 0.71041L, 0.16904L, -1.52736L},
                                    {5.00401L, 9.73491L, 1.85765L, 1.06745L},
                                    {-10.43248L, 47.41496L, 18.96849L, 1.93229L},
                                    {8.22992L, -437.50962L, -42.4318L, 3.89L}};
inline constexpr LD a_exp[4][4] = {{0, 0, 0, 0},
                                   {5, 1.8L, 1.7L, -0.84L},
                                   {7, 7.32L, 10, 1.02L},
                                   {9, 22.8L, 14, 13.4L}};
inline constexpr LD b_coef[4][4] = {{-0.0973L, 0.53193L, 0.24876L, 5.29801L},
                                    {-16.70566L, 6.70858L, 2.72423L, 0.05142L},
                                    {67.13845L, 52.04855L, 13.28649L, -5.18302L},
                                    {-50.25518L, -540.66947L, -36.80372L, 2.7641L}};
inline constexpr LD b_exp[4][4] = {{0, 0, 0, 0},
                                   {7, 1.49L, 3.85L, -2},
                                   {9, 6.58L, 10, 0.41L},
                                   {10, 24.8L, 15, 6}};

inline std::array<LD, 4> expand(const LD (&c)[4][4], const LD (&e)[4][4], LD f) {
  std::array<LD, 4> out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i] += c[j][i] * std::pow(f, e[j][i]);
  return out;
}

template <class T>
T sigmoid(const std::array<LD, 4>& p, T x) {
  return p[0] + p[1] / (T(1) + p[2] * std::exp(p[3] * x));
}

struct Indices {
  LD n_core, n_eff, n_fsm;
};

template <class T>
T n_eff(T lambda_um, LD pitch_um, LD f) {
  const auto A = expand(a_coef, a_exp, f);
  const auto B = expand(b_coef, b_exp, f);
  const T x = lambda_um / pitch_um;
  const T V = sigmoid(A, x), W = sigmoid(B, x);
  const LD a_eff = pitch_um / std::sqrt(3.0L);
  const T k = lambda_um / (2 * kPi * a_eff);
  const T nc = silica_index(lambda_um);
  return std::sqrt(nc * nc - k * k * (V * V - W * W));
}

inline Indices indices(LD lambda_um, LD pitch_um, LD f) {
  const auto A = expand(a_coef, a_exp, f);
  const LD x = lambda_um / pitch_um;
  const LD V = sigmoid(A, x);
  const LD k = lambda_um / (2 * kPi * pitch_um / std::sqrt(3.0L));
  const LD nc = silica_index(lambda_um);
  return {nc, n_eff(lambda_um, pitch_um, f), std::sqrt(nc * nc - k * k * V * V)};
}

// beta(omega) in 1/m, omega in rad/s.
template <class T>
T beta(T omega, LD pitch_um, LD f) {
  const T lambda_um = 2 * kPi * kC / omega * T(1e6L);
  return n_eff(lambda_um, pitch_um, f) * omega / kC;
}

// Complex-step first derivative: Im f(w + ih) / h, exact to rounding.
inline LD beta1(LD omega, LD pitch_um, LD f) {
  const LD h = omega * 1e-20L;
  return std::imag(beta(CLD(omega, h), pitch_um, f)) / h;
}

// Central difference of the complex-step beta1.
inline LD beta2(LD omega, LD pitch_um, LD f) {
  const LD h = omega * 1e-5L;
  return (beta1(omega + h, pitch_um, f) - beta1(omega - h, pitch_um, f)) / (2 * h);
}

inline LD omega_nm(LD nm) { return 2 * kPi * kC / (nm * 1e-9L); }
inline LD nm_omega(LD w) { return 2 * kPi * kC / w * 1e9L; }

// Shortest-wavelength zero of beta2 in [lo, hi] nm by plain bisection.
inline LD zdw_nm(LD pitch_um, LD f, LD lo = 600, LD hi = 1700) {
  auto g = [&](LD nm) { return beta2(omega_nm(nm), pitch_um, f); };
  LD a = lo, ga = g(a);
  for (LD b = lo + 1; b <= hi; b += 1) {
    const LD gb = g(b);
    if ((ga < 0) != (gb < 0)) {
      LD x0 = a, x1 = b;
      for (int i = 0; i < 60; ++i) {
        const LD m = 0.5L * (x0 + x1);
        if ((g(m) < 0) == (ga < 0)) x0 = m;
        else x1 = m;
      }
      return 0.5L * (x0 + x1);
    }
    a = b;
    ga = gb;
  }
  return NAN;
}

} // namespace oracle
