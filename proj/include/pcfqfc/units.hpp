#pragma once

#include <numbers>

namespace pcfqfc {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Vacuum wavelength in nm to angular frequency in rad/s.
constexpr double omega_from_nm(double lambda_nm) {
  return kTwoPi * kSpeedOfLight / (lambda_nm * 1e-9);
}

constexpr double nm_from_omega(double omega) {
  return kTwoPi * kSpeedOfLight / omega * 1e9;
}

constexpr double um_from_omega(double omega) {
  return kTwoPi * kSpeedOfLight / omega * 1e6;
}

constexpr double omega_from_um(double lambda_um) {
  return kTwoPi * kSpeedOfLight / (lambda_um * 1e-6);
}

/// Optical frequency (Hz) for a wavelength in nm.
constexpr double hz_from_nm(double lambda_nm) {
  return kSpeedOfLight / (lambda_nm * 1e-9);
}

} // namespace pcfqfc
