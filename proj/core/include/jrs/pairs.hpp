#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jrs/rankin.hpp"

namespace jrs {

// Named (phi, phi) pairs used by the command line and the acceptance suite.
struct NamedPair {
  std::string name;
  int k = 0;
  int m = 0;  // 0 for an elliptic pair
  std::optional<JacobiFormTable> phi;
  std::optional<QSeries> f;
  RankinPair rankin;
};

// phi10, phi12, v2-phi10, delta
const std::vector<std::string>& pair_names();
// Built once per (name, D_max) and cached. Throws std::invalid_argument for an unknown name.
const NamedPair& named_pair(const std::string& name, std::int64_t D_max = 4000);

}  // namespace jrs
