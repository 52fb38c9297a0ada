#include <bit>
#include <cmath>
#include <string>
#include <unordered_map>

#include "lrising/errors.hpp"
#include "lrising/sw_effective.hpp"

namespace lrising {

namespace {

std::string describe(Configuration c) {
  std::string out = "{";
  bool first = true;
  while (c != 0) {
    const int s = std::countr_zero(c);
    c &= c - 1;
    out += (first ? "" : ",") + std::to_string(s);
    first = false;
  }
  return out + "}";
}

}  // namespace

EffectiveHamiltonian build_sector_generic(const SectorBasis& basis, const Lattice& lattice,
                                          double J, double g, const SwOptions& options) {
  if (basis.kind != BasisKind::positions && basis.kind != BasisKind::zero_momentum) {
    throw std::invalid_argument("build_sector_generic: needs a configuration basis");
  }
  if (lattice.sites() > 64 || basis.L != lattice.size()) {
    throw ConfigError("build_sector_generic: basis does not belong to this lattice");
  }
  if (basis.size() > options.basis_cap) {
    throw ConfigError("build_sector_generic: basis of " + std::to_string(basis.size()) +
                      " states exceeds the cap of " + std::to_string(options.basis_cap));
  }
  if (!(J > 0.0)) {
    throw ConfigError("J must be positive");
  }
  const bool zero_momentum = basis.kind == BasisKind::zero_momentum;
  const int n = lattice.sites();
  const auto m = static_cast<Eigen::Index>(basis.size());
  const double guard = options.eps_sw * J;
  // <m|T|beta> = -1/2 for T = -sum_i S^x_i; only products of two enter.
  const double tt = 0.25;

  std::unordered_map<Configuration, double> energy_cache;
  auto energy = [&](Configuration c) {
    const auto it = energy_cache.find(c);
    if (it != energy_cache.end()) {
      return it->second;
    }
    const double e = magnon_energy(c, lattice, J);
    energy_cache.emplace(c, e);
    return e;
  };
  auto inverse_gap = [&](Configuration a, Configuration beta) {
    const double d = energy(a) - energy(beta);
    if (std::abs(d) < guard) {
      throw SwDegeneracyError("degenerate second-order denominator between " + describe(a) +
                              " and virtual state " + describe(beta) + " (gap " +
                              std::to_string(d) + ")");
    }
    return 1.0 / d;
  };

  EffectiveHamiltonian H;
  H.basis = basis;
  H.mode = SwMode::generic_sw;
  H.constant = polarized_energy(lattice, J) + basis.nu * magnon_cost(lattice, J);
  H.matrix = Eigen::MatrixXd::Zero(m, m);

  for (Eigen::Index row = 0; row < m; ++row) {
    const Configuration cm = basis.configs[row];
    H.matrix(row, row) += energy(cm);
    for (int k = 0; k < n; ++k) {
      const Configuration beta = cm ^ (Configuration{1} << k);
      const double gm = inverse_gap(cm, beta);
      for (int l = 0; l < n; ++l) {
        const Configuration cn = beta ^ (Configuration{1} << l);
        if (std::popcount(cn) != basis.nu) {
          continue;
        }
        const Configuration key = zero_momentum ? translation_representative(cn, lattice) : cn;
        const std::size_t col = basis.find(key);
        if (col == SectorBasis::npos) {
          continue;  // filtered out of the restricted sector
        }
        double value = 0.5 * g * g * tt * (gm + inverse_gap(cn, beta));
        if (zero_momentum) {
          value *= std::sqrt(static_cast<double>(basis.orbit_sizes[row]) /
                             static_cast<double>(basis.orbit_sizes[col]));
        }
        H.matrix(row, static_cast<Eigen::Index>(col)) += value;
      }
    }
  }
  return H;
}

std::size_t zero_momentum_index(const SectorBasis& basis, Displacement d, const Lattice& lattice) {
  if (basis.kind != BasisKind::zero_momentum || basis.nu != 2) {
    throw std::invalid_argument("zero_momentum_index: needs a zero-momentum two-magnon basis");
  }
  return basis.find(translation_representative(pair_configuration(d, lattice), lattice));
}

}  // namespace lrising
