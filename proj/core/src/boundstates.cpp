#include "lrising/boundstates.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lrising {

std::string to_string(StateLabel label) {
  switch (label) {
    case StateLabel::bound:
      return "bound";
    case StateLabel::quasilocalized:
      return "quasilocalized";
    case StateLabel::scattering:
      return "scattering";
  }
  return "?";
}

double ipr(const Eigen::Ref<const Eigen::VectorXd>& psi) {
  const double norm2 = psi.squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-9) {
    throw std::invalid_argument("ipr: state is not normalised (sum |psi|^2 = " +
                                std::to_string(norm2) + ")");
  }
  return psi.array().square().square().sum();
}

double mean_separation(const Eigen::Ref<const Eigen::VectorXd>& psi, const SectorBasis& basis) {
  if (basis.kind != BasisKind::displacements) {
    throw std::invalid_argument("mean_separation: needs a displacement basis");
  }
  if (static_cast<std::size_t>(psi.size()) != basis.size()) {
    throw std::invalid_argument("mean_separation: state length " + std::to_string(psi.size()) +
                                " does not match basis size " + std::to_string(basis.size()));
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    sum += psi[i] * psi[i] * basis.displacements[static_cast<std::size_t>(i)].length();
  }
  return sum;
}

std::vector<BoundStateRecord> classify(const EigenSolution& solution, const SectorBasis& basis,
                                       const BoundStateThresholds& thresholds) {
  const auto M = static_cast<double>(basis.size());
  std::vector<BoundStateRecord> out;
  out.reserve(static_cast<std::size_t>(solution.size()));
  for (Eigen::Index k = 0; k < solution.size(); ++k) {
    const auto psi = solution.vectors.col(k);
    BoundStateRecord r;
    r.eigen_index = static_cast<std::size_t>(k);
    r.energy = solution.values[k];
    r.ipr = ipr(psi);
    r.dbar = mean_separation(psi, basis);
    if (r.ipr >= thresholds.bound_ipr) {
      r.label = StateLabel::bound;
    } else if (r.ipr <= thresholds.scattering_factor / M) {
      r.label = StateLabel::scattering;
    } else {
      r.label = StateLabel::quasilocalized;
    }
    out.push_back(r);
  }
  return out;
}

Displacement DensityMap::argmax() const {
  Eigen::Index bi = 0;
  Eigen::Index bj = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < grid.rows(); ++i) {
    for (Eigen::Index j = 0; j < grid.cols(); ++j) {
      if (grid(i, j) > best) {
        best = grid(i, j);
        bi = i;
        bj = j;
      }
    }
  }
  return {static_cast<int>(bi) - offset, static_cast<int>(bj) - offset};
}

DensityMap density_map(const Eigen::Ref<const Eigen::VectorXd>& psi, const SectorBasis& basis,
                       int L) {
  if (basis.kind != BasisKind::displacements || basis.L != L) {
    throw std::invalid_argument("density_map: needs a displacement basis of the same lattice");
  }
  if (static_cast<std::size_t>(psi.size()) != basis.size()) {
    throw std::invalid_argument("density_map: state length does not match basis");
  }
  DensityMap map;
  map.L = L;
  map.offset = (L - 1) / 2;
  map.grid = Eigen::MatrixXd::Zero(L, L);
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    const Displacement d = basis.displacements[static_cast<std::size_t>(i)];
    const double p = psi[i] * psi[i];
    if (basis.orbit_sizes[static_cast<std::size_t>(i)] == 2) {
      const Displacement inv{canonical_component(-d.dx, L), canonical_component(-d.dy, L)};
      map.grid(d.dx + map.offset, d.dy + map.offset) += 0.5 * p;
      map.grid(inv.dx + map.offset, inv.dy + map.offset) += 0.5 * p;
    } else {
      map.grid(d.dx + map.offset, d.dy + map.offset) += p;
    }
  }
  return map;
}

}  // namespace lrising
