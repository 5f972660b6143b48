#pragma once

#include "pcfqfc/dispersion.hpp"

namespace testing {

inline const pcfqfc::PcfModel& model() {
  static const pcfqfc::PcfModel m = pcfqfc::PcfModel::load();
  return m;
}

inline constexpr pcfqfc::FiberGeometry kNominal{2.11, 0.337, 0.1, 47.0};
inline constexpr pcfqfc::FiberGeometry kFitted{2.1044, 0.3389, 0.1, 47.0};

} // namespace testing
