#pragma once

#include "pcfqfc/datafile.hpp"

#include <array>
#include <string>

namespace pcfqfc {

using Table4 = std::array<std::array<double, 4>, 4>;

struct ValidityRange {
  double lo;
  double hi;
  bool contains(double v) const { return v >= lo && v <= hi; }
};

struct VwParameters {
  double v; // effective normalized frequency
  double w; // normalized transverse decay constant
};

/// A_i and B_i for one hole ratio; V and W then depend on lambda/pitch only.
struct VwExpansion {
  std::array<double, 4> a;
  std::array<double, 4> b;
  ValidityRange lambda_over_pitch;

  /// Throws DomainError outside the lambda/pitch validity range.
  VwParameters at(double lambda_over_pitch) const;
};

/// Fit tables for the normalized frequency V and decay parameter W of the
/// PCF fundamental mode as functions of lambda/pitch and d/pitch.
///
/// Each of A1..A4 (for V) and B1..B4 (for W) is expanded as
/// sum_j coeff[j][i] * (d/pitch)^exponent[j][i]; then
/// V = A1 + A2 / (1 + A3 exp(A4 lambda/pitch)) and likewise for W.
class EmpiricalCoefficients {
public:
  EmpiricalCoefficients(Table4 v_coeff, Table4 v_exponent, Table4 w_coeff,
                        Table4 w_exponent, ValidityRange lambda_over_pitch,
                        ValidityRange hole_ratio, std::string name = {});

  static EmpiricalCoefficients from_file(const std::string& path);
  static EmpiricalCoefficients from_data(const KeyValueFile& file);

  /// Throws DomainError outside the validity rectangle.
  VwParameters evaluate(double lambda_over_pitch, double hole_ratio) const;

  /// Throws DomainError when the hole ratio is outside the validity range.
  VwExpansion expand(double hole_ratio) const;

  const ValidityRange& lambda_over_pitch() const { return lambda_over_pitch_; }
  const ValidityRange& hole_ratio() const { return hole_ratio_; }
  const std::string& name() const { return name_; }
  const std::string& checksum() const { return checksum_; }

private:
  Table4 v_coeff_, v_exponent_, w_coeff_, w_exponent_;
  ValidityRange lambda_over_pitch_;
  ValidityRange hole_ratio_;
  std::string name_;
  std::string checksum_;
};

} // namespace pcfqfc
