#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace lrising {

/// Eigenenergies of one sector with a tag describing where they came from.
struct SectorLevels {
  int nu = 0;
  Eigen::VectorXd energies;  // ascending
  std::string provenance;
};

/// delta = |E_i^nu - E_j^nu'| with 1-based level indices i, j.
struct GapEntry {
  int nu = 0;
  int nu_prime = 0;
  int i = 0;
  int j = 0;
  double delta = 0.0;
  std::string provenance;
};

struct GapTable {
  std::vector<GapEntry> entries;

  /// Entry (nu, nu', i, j) or nullptr.
  const GapEntry* find(int nu, int nu_prime, int i, int j) const;
};

/// All gaps between distinct sectors (nu < nu') using the lowest
/// `max_levels` levels of each. Sorted ascending in delta; ties broken by
/// (nu, nu', i, j). Throws std::invalid_argument for fewer than two sectors.
GapTable gap_table(const std::vector<SectorLevels>& sectors, int max_levels);

}  // namespace lrising
