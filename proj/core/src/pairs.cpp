#include "jrs/pairs.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace jrs {

namespace {

NamedPair build(const std::string& name, std::int64_t D_max) {
  if (name == "delta") {
    QSeries d = ramanujan_delta(D_max);
    RankinPair p = RankinPair::elliptic(d, d, 12);
    return NamedPair{name, 12, 0, std::nullopt, std::move(d), std::move(p)};
  }
  const auto forms = cusp_forms_index1(D_max);
  JacobiFormTable phi = name == "phi10"      ? forms.first
                        : name == "phi12"    ? forms.second
                                             : hecke_V(forms.first, 2);
  RankinPair p = RankinPair::jacobi(phi, phi);
  const int k = phi.weight(), m = phi.index();
  return NamedPair{name, k, m, std::move(phi), std::nullopt, std::move(p)};
}

}  // namespace

const std::vector<std::string>& pair_names() {
  static const std::vector<std::string> names{"phi10", "phi12", "v2-phi10", "delta"};
  return names;
}

const NamedPair& named_pair(const std::string& name, std::int64_t D_max) {
  bool known = false;
  for (const auto& n : pair_names()) known = known || n == name;
  if (!known) throw std::invalid_argument("unknown pair '" + name + "' (expected phi10, phi12, v2-phi10 or delta)");
  if (D_max < 16) throw std::invalid_argument("pair precision must be at least 16");

  static std::mutex mu;
  static std::map<std::pair<std::string, std::int64_t>, std::unique_ptr<NamedPair>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{name, D_max}];
  if (!slot) slot = std::make_unique<NamedPair>(build(name, D_max));
  return *slot;
}

}  // namespace jrs
