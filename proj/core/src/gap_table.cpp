#include "lrising/gap_table.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace lrising {

const GapEntry* GapTable::find(int nu, int nu_prime, int i, int j) const {
  for (const auto& e : entries) {
    if (e.nu == nu && e.nu_prime == nu_prime && e.i == i && e.j == j) {
      return &e;
    }
  }
  return nullptr;
}

GapTable gap_table(const std::vector<SectorLevels>& sectors, int max_levels) {
  if (sectors.size() < 2) {
    throw std::invalid_argument("gap_table: need at least two sectors");
  }
  if (max_levels < 1) {
    throw std::invalid_argument("gap_table: max_levels must be positive");
  }
  GapTable table;
  for (std::size_t a = 0; a < sectors.size(); ++a) {
    for (std::size_t b = 0; b < sectors.size(); ++b) {
      const auto& lo = sectors[a];
      const auto& hi = sectors[b];
      if (lo.nu >= hi.nu) {
        continue;
      }
      const auto na = std::min<Eigen::Index>(max_levels, lo.energies.size());
      const auto nb = std::min<Eigen::Index>(max_levels, hi.energies.size());
      for (Eigen::Index i = 0; i < na; ++i) {
        for (Eigen::Index j = 0; j < nb; ++j) {
          table.entries.push_back({lo.nu, hi.nu, static_cast<int>(i) + 1, static_cast<int>(j) + 1,
                                   std::abs(lo.energies[i] - hi.energies[j]),
                                   lo.provenance + " | " + hi.provenance});
        }
      }
    }
  }
  std::sort(table.entries.begin(), table.entries.end(), [](const GapEntry& x, const GapEntry& y) {
    return std::tie(x.delta, x.nu, x.nu_prime, x.i, x.j) <
           std::tie(y.delta, y.nu, y.nu_prime, y.i, y.j);
  });
  return table;
}

}  // namespace lrising
