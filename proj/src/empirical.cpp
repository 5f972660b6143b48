#include "pcfqfc/empirical.hpp"

#include "pcfqfc/error.hpp"

#include <cmath>
#include <sstream>

namespace pcfqfc {

namespace {

Table4 read_table(const KeyValueFile& file, const std::string& key) {
  const auto& rows = file.table(key);
  if (rows.size() != 4)
    throw ConfigError(file.path + ": table '" + key + "' needs 4 rows");
  Table4 t{};
  for (std::size_t j = 0; j < 4; ++j) {
    if (rows[j].size() != 4)
      throw ConfigError(file.path + ": table '" + key + "' row " +
                        std::to_string(j) + " needs 4 columns");
    for (std::size_t i = 0; i < 4; ++i) t[j][i] = rows[j][i];
  }
  return t;
}

ValidityRange read_range(const KeyValueFile& file, const std::string& key) {
  const auto v = file.numbers(key);
  if (v.size() != 2 || !(v[1] > v[0]))
    throw ConfigError(file.path + ": '" + key + "' must be 'lo hi', lo < hi");
  return {v[0], v[1]};
}

std::array<double, 4> expand_terms(const Table4& coeff, const Table4& exponent,
                             double f) {
  std::array<double, 4> out{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      out[i] += coeff[j][i] * std::pow(f, exponent[j][i]);
  return out;
}

bool finite(const Table4& t) {
  for (const auto& row : t)
    for (double v : row)
      if (!std::isfinite(v)) return false;
  return true;
}

} // namespace

EmpiricalCoefficients::EmpiricalCoefficients(
    Table4 v_coeff, Table4 v_exponent, Table4 w_coeff, Table4 w_exponent,
    ValidityRange lambda_over_pitch, ValidityRange hole_ratio, std::string name)
    : v_coeff_(v_coeff), v_exponent_(v_exponent), w_coeff_(w_coeff),
      w_exponent_(w_exponent), lambda_over_pitch_(lambda_over_pitch),
      hole_ratio_(hole_ratio), name_(std::move(name)) {
  if (!finite(v_coeff_) || !finite(v_exponent_) || !finite(w_coeff_) ||
      !finite(w_exponent_))
    throw ConfigError("empirical coefficient tables contain non-finite values");
  if (!(lambda_over_pitch_.hi > lambda_over_pitch_.lo &&
        hole_ratio_.hi > hole_ratio_.lo && hole_ratio_.lo > 0.0 &&
        hole_ratio_.hi < 1.0))
    throw ConfigError("empirical validity rectangle is empty or invalid");
}

EmpiricalCoefficients EmpiricalCoefficients::from_file(const std::string& path) {
  return from_data(read_keyvalue_file(path));
}

EmpiricalCoefficients EmpiricalCoefficients::from_data(const KeyValueFile& file) {
  if (file.scalar("format_version") != "1")
    throw ConfigError(file.path + ": unsupported format_version");
  auto name = file.scalars.count("name") ? file.scalar("name") : std::string{};
  EmpiricalCoefficients c(read_table(file, "v.coeff"),
                          read_table(file, "v.exponent"),
                          read_table(file, "w.coeff"),
                          read_table(file, "w.exponent"),
                          read_range(file, "validity.lambda_over_pitch"),
                          read_range(file, "validity.hole_ratio"),
                          std::move(name));
  c.checksum_ = file.sha256;
  return c;
}

VwParameters VwExpansion::at(double x) const {
  if (!lambda_over_pitch.contains(x)) {
    std::ostringstream msg;
    msg << "lambda/pitch = " << x << " outside empirical validity ["
        << lambda_over_pitch.lo << ", " << lambda_over_pitch.hi << "]";
    throw DomainError(msg.str());
  }
  return {a[0] + a[1] / (1.0 + a[2] * std::exp(a[3] * x)),
          b[0] + b[1] / (1.0 + b[2] * std::exp(b[3] * x))};
}

VwExpansion EmpiricalCoefficients::expand(double hole_ratio) const {
  if (!hole_ratio_.contains(hole_ratio)) {
    std::ostringstream msg;
    msg << "d/pitch = " << hole_ratio << " outside empirical validity ["
        << hole_ratio_.lo << ", " << hole_ratio_.hi << "]";
    throw DomainError(msg.str());
  }
  return {expand_terms(v_coeff_, v_exponent_, hole_ratio),
          expand_terms(w_coeff_, w_exponent_, hole_ratio), lambda_over_pitch_};
}

VwParameters EmpiricalCoefficients::evaluate(double lambda_over_pitch,
                                             double hole_ratio) const {
  return expand(hole_ratio).at(lambda_over_pitch);
}

} // namespace pcfqfc
