#include "pcfqfc/material.hpp"

#include "pcfqfc/error.hpp"

#include <cmath>
#include <sstream>

namespace pcfqfc {

SellmeierMaterial::SellmeierMaterial(std::vector<SellmeierTerm> terms,
                                     double min_um, double max_um,
                                     std::string name)
    : terms_(std::move(terms)), min_um_(min_um), max_um_(max_um),
      name_(std::move(name)) {
  if (terms_.empty()) throw ConfigError("Sellmeier model has no terms");
  if (!(min_um_ > 0.0 && max_um_ > min_um_))
    throw ConfigError("Sellmeier validity range is empty");
  validate();
}

SellmeierMaterial SellmeierMaterial::from_file(const std::string& path) {
  return from_data(read_keyvalue_file(path));
}

SellmeierMaterial SellmeierMaterial::from_data(const KeyValueFile& file) {
  if (file.scalar("format_version") != "1")
    throw ConfigError(file.path + ": unsupported format_version");
  if (file.scalar("units.lambda") != "um" || file.scalar("units.C") != "um^2")
    throw ConfigError(file.path + ": Sellmeier units must be um and um^2");
  const auto range = file.numbers("validity_um");
  if (range.size() != 2)
    throw ConfigError(file.path + ": validity_um needs two numbers");
  std::vector<SellmeierTerm> terms;
  for (const auto& row : file.table("terms")) {
    if (row.size() != 2)
      throw ConfigError(file.path + ": each Sellmeier term needs B and C");
    terms.push_back({row[0], row[1]});
  }
  auto name = file.scalars.count("name") ? file.scalar("name") : std::string{};
  SellmeierMaterial m(std::move(terms), range[0], range[1], std::move(name));
  m.checksum_ = file.sha256;
  return m;
}

double SellmeierMaterial::index(double lambda_um) const {
  if (!(lambda_um >= min_um_ && lambda_um <= max_um_)) {
    std::ostringstream msg;
    msg << "wavelength " << lambda_um << " um outside material range ["
        << min_um_ << ", " << max_um_ << "] um";
    throw DomainError(msg.str());
  }
  const double l2 = lambda_um * lambda_um;
  double n2 = 1.0;
  for (const auto& t : terms_) n2 += t.b * l2 / (l2 - t.c_um2);
  return std::sqrt(n2);
}

void SellmeierMaterial::validate() const {
  // Real index above unity across [0.5, 2.0] um (clipped to the declared
  // range), and normal dispersion across [0.6, 1.3] um.
  const double lo = std::max(0.5, min_um_), hi = std::min(2.0, max_um_);
  for (int i = 0; i <= 300; ++i) {
    const double l = lo + (hi - lo) * i / 300.0;
    const double l2 = l * l;
    double n2 = 1.0;
    for (const auto& t : terms_) n2 += t.b * l2 / (l2 - t.c_um2);
    if (!(n2 > 1.0) || !std::isfinite(n2))
      throw ConfigError("Sellmeier model gives n <= 1 or a pole inside the "
                        "working band");
  }
  const double nlo = std::max(0.6, min_um_), nhi = std::min(1.3, max_um_);
  double prev = index(nlo);
  for (int i = 1; i <= 140; ++i) {
    const double n = index(nlo + (nhi - nlo) * i / 140.0);
    if (!(n <= prev))
      throw ConfigError("Sellmeier model has an index rising with wavelength on "
                        "[0.6, 1.3] um");
    prev = n;
  }
}

} // namespace pcfqfc
