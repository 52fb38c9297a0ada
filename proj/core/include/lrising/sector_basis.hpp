#pragma once

// Bases of fixed magnon number nu. Configurations are bit masks over the
// L^2 sites (bit s set = magnon on site s), so at most 64 sites.

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "lrising/lattice.hpp"

namespace lrising {

using Configuration = std::uint64_t;

enum class BasisKind {
  positions,      // every nu-magnon configuration, no symmetry reduction
  sites,          // nu = 1 site basis for any L: state i is a magnon on site i
  zero_momentum,  // one representative per translation orbit, K = 0
  displacements,  // nu = 2 relative coordinate d (closed-form builders)
};

enum class SectorFilter {
  none,
  nearest_neighbour_pair,  // at least two magnons on nearest-neighbour sites
};

std::string to_string(SectorFilter filter);
std::string to_string(BasisKind kind);

struct SectorBasis {
  int L = 0;
  int nu = 0;
  BasisKind kind = BasisKind::positions;
  SectorFilter filter = SectorFilter::none;
  bool identify_inversion = false;
  /// positions / zero_momentum: the configuration (orbit representative).
  std::vector<Configuration> configs;
  /// zero_momentum: translation-orbit size; displacements: size of {d, -d}.
  std::vector<int> orbit_sizes;
  /// displacements: canonical representative.
  std::vector<Displacement> displacements;

  std::size_t size() const;
  /// Index of a configuration (for zero_momentum: of its orbit), or npos.
  std::size_t find(Configuration c) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::unordered_map<Configuration, std::size_t> index;
};

/// Default cap on the number of basis states.
inline constexpr std::size_t kDefaultBasisCap = 50000;

/// Smallest configuration word among all lattice translations of `c`.
Configuration translation_representative(Configuration c, const Lattice& lattice);
/// Number of distinct translates of `c`.
int translation_orbit_size(Configuration c, const Lattice& lattice);
bool has_nearest_neighbour_pair(Configuration c, const Lattice& lattice);
/// Configuration with magnons on site 0 and on the site at displacement d.
Configuration pair_configuration(Displacement d, const Lattice& lattice);

/// Throws ConfigError if L^2 > 64 or the basis exceeds `cap`.
SectorBasis position_basis(const Lattice& lattice, int nu, SectorFilter filter = SectorFilter::none,
                           std::size_t cap = kDefaultBasisCap);
SectorBasis zero_momentum_basis(const Lattice& lattice, int nu,
                                SectorFilter filter = SectorFilter::none,
                                std::size_t cap = kDefaultBasisCap);
/// Single-magnon site basis (any L, no 64-site restriction).
SectorBasis site_basis(int L);
/// Relative-coordinate basis of the two-magnon sector.
SectorBasis displacement_basis(int L, bool identify_inversion);

/// Calls f(c) for every word with exactly `nu` of the low `bits` bits set,
/// in increasing numeric order.
template <typename F>
void for_each_combination(int bits, int nu, F&& f) {
  if (nu < 0 || nu > bits) {
    return;
  }
  if (nu == 0) {
    f(Configuration{0});
    return;
  }
  const Configuration limit = bits == 64 ? 0 : (Configuration{1} << bits);
  Configuration c = (nu == 64) ? ~Configuration{0} : ((Configuration{1} << nu) - 1);
  while (true) {
    f(c);
    // Gosper's hack: next word with the same popcount.
    const Configuration u = c & (~c + 1);
    const Configuration v = c + u;
    if (v == 0) {
      return;
    }
    c = v + (((v ^ c) / u) >> 2);
    if (limit != 0 && c >= limit) {
      return;
    }
  }
}

}  // namespace lrising
