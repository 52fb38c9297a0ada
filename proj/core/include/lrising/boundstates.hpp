#pragma once

// Localisation analysis of two-magnon eigenstates in the relative coordinate.

#include <string>
#include <vector>

#include <Eigen/Core>

#include "lrising/eigensolver.hpp"
#include "lrising/lattice.hpp"
#include "lrising/sector_basis.hpp"

namespace lrising {

enum class StateLabel { bound, quasilocalized, scattering };

std::string to_string(StateLabel label);

/// bound: ipr >= bound_ipr; scattering: ipr <= scattering_factor / M;
/// quasilocalized otherwise.
struct BoundStateThresholds {
  double bound_ipr = 0.1;
  double scattering_factor = 5.0;
};

struct BoundStateRecord {
  std::size_t eigen_index = 0;
  double energy = 0.0;
  double ipr = 0.0;
  double dbar = 0.0;
  StateLabel label = StateLabel::scattering;
};

/// sum |psi|^4. Throws std::invalid_argument unless sum |psi|^2 = 1 within 1e-9.
double ipr(const Eigen::Ref<const Eigen::VectorXd>& psi);

/// sum |psi_d|^2 |d| over a displacement basis (minimum-image |d|).
double mean_separation(const Eigen::Ref<const Eigen::VectorXd>& psi, const SectorBasis& basis);

std::vector<BoundStateRecord> classify(const EigenSolution& solution, const SectorBasis& basis,
                                       const BoundStateThresholds& thresholds = {});

/// |psi(d)|^2 on the L x L grid of canonical displacements; entry
/// (dx + offset, dy + offset) with offset = (L - 1) / 2. A class {d, -d} of
/// an inversion-identified basis is split evenly between its members.
struct DensityMap {
  int L = 0;
  int offset = 0;
  Eigen::MatrixXd grid;

  double at(Displacement d) const { return grid(d.dx + offset, d.dy + offset); }
  /// Displacement of the largest entry (first in row-major order on ties).
  Displacement argmax() const;
  double sum() const { return grid.sum(); }
};

DensityMap density_map(const Eigen::Ref<const Eigen::VectorXd>& psi, const SectorBasis& basis,
                       int L);

}  // namespace lrising
