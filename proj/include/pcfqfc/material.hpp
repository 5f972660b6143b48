#pragma once

#include "pcfqfc/datafile.hpp"

#include <string>
#include <vector>

namespace pcfqfc {

struct SellmeierTerm {
  double b;       // oscillator strength, dimensionless
  double c_um2;   // resonance wavelength squared, um^2
};

/// Bulk refractive index from a Sellmeier expansion
/// n^2 = 1 + sum B lambda^2 / (lambda^2 - C).
class SellmeierMaterial {
public:
  SellmeierMaterial(std::vector<SellmeierTerm> terms, double min_um,
                    double max_um, std::string name = {});

  static SellmeierMaterial from_file(const std::string& path);
  static SellmeierMaterial from_data(const KeyValueFile& file);

  /// Throws DomainError outside [min_um, max_um].
  double index(double lambda_um) const;

  double min_um() const { return min_um_; }
  double max_um() const { return max_um_; }
  const std::vector<SellmeierTerm>& terms() const { return terms_; }
  const std::string& name() const { return name_; }
  const std::string& checksum() const { return checksum_; }

private:
  void validate() const;

  std::vector<SellmeierTerm> terms_;
  double min_um_;
  double max_um_;
  std::string name_;
  std::string checksum_;
};

} // namespace pcfqfc
