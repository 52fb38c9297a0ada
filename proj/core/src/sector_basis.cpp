#include "lrising/sector_basis.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "lrising/errors.hpp"

namespace lrising {

std::string to_string(SectorFilter filter) {
  switch (filter) {
    case SectorFilter::none:
      return "none";
    case SectorFilter::nearest_neighbour_pair:
      return "nn";
  }
  return "?";
}

std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::positions:
      return "positions";
    case BasisKind::sites:
      return "sites";
    case BasisKind::zero_momentum:
      return "zero_momentum";
    case BasisKind::displacements:
      return "displacements";
  }
  return "?";
}

std::size_t SectorBasis::size() const {
  switch (kind) {
    case BasisKind::displacements:
      return displacements.size();
    case BasisKind::sites:
      return static_cast<std::size_t>(L) * static_cast<std::size_t>(L);
    default:
      return configs.size();
  }
}

std::size_t SectorBasis::find(Configuration c) const {
  const auto it = index.find(c);
  return it == index.end() ? npos : it->second;
}

namespace {

Configuration translate_config(Configuration c, int tx, int ty, const Lattice& lattice) {
  Configuration out = 0;
  while (c != 0) {
    const int s = std::countr_zero(c);
    c &= c - 1;
    const auto [x, y] = lattice.coords(s);
    out |= Configuration{1} << lattice.site(x + tx, y + ty);
  }
  return out;
}

void check_width(const Lattice& lattice) {
  if (lattice.sites() > 64) {
    throw ConfigError("configuration bases need at most 64 sites, got " +
                      std::to_string(lattice.sites()));
  }
}

bool keep(Configuration c, SectorFilter filter, const Lattice& lattice) {
  return filter == SectorFilter::none || has_nearest_neighbour_pair(c, lattice);
}

}  // namespace

Configuration translation_representative(Configuration c, const Lattice& lattice) {
  Configuration best = c;
  const int L = lattice.size();
  for (int tx = 0; tx < L; ++tx) {
    for (int ty = 0; ty < L; ++ty) {
      best = std::min(best, translate_config(c, tx, ty, lattice));
    }
  }
  return best;
}

int translation_orbit_size(Configuration c, const Lattice& lattice) {
  const int L = lattice.size();
  int stabiliser = 0;
  for (int tx = 0; tx < L; ++tx) {
    for (int ty = 0; ty < L; ++ty) {
      stabiliser += translate_config(c, tx, ty, lattice) == c ? 1 : 0;
    }
  }
  return lattice.sites() / stabiliser;
}

bool has_nearest_neighbour_pair(Configuration c, const Lattice& lattice) {
  Configuration rest = c;
  while (rest != 0) {
    const int s = std::countr_zero(rest);
    rest &= rest - 1;
    Configuration others = rest;
    while (others != 0) {
      const int t = std::countr_zero(others);
      others &= others - 1;
      if (lattice.displacement(s, t).norm2() == 1) {
        return true;
      }
    }
  }
  return false;
}

Configuration pair_configuration(Displacement d, const Lattice& lattice) {
  check_width(lattice);
  const Displacement c = lattice.canonical(d);
  if (c.is_zero()) {
    throw std::invalid_argument("pair_configuration: zero displacement");
  }
  return Configuration{1} | (Configuration{1} << lattice.site(c.dx, c.dy));
}

SectorBasis position_basis(const Lattice& lattice, int nu, SectorFilter filter, std::size_t cap) {
  check_width(lattice);
  if (nu < 0 || nu > lattice.sites()) {
    throw ConfigError("magnon number out of range: " + std::to_string(nu));
  }
  SectorBasis b;
  b.L = lattice.size();
  b.nu = nu;
  b.kind = BasisKind::positions;
  b.filter = filter;
  for_each_combination(lattice.sites(), nu, [&](Configuration c) {
    if (!keep(c, filter, lattice)) {
      return;
    }
    if (b.configs.size() >= cap) {
      throw ConfigError("sector basis exceeds the cap of " + std::to_string(cap) + " states");
    }
    b.index.emplace(c, b.configs.size());
    b.configs.push_back(c);
    b.orbit_sizes.push_back(1);
  });
  return b;
}

SectorBasis zero_momentum_basis(const Lattice& lattice, int nu, SectorFilter filter,
                                std::size_t cap) {
  check_width(lattice);
  if (nu < 0 || nu > lattice.sites()) {
    throw ConfigError("magnon number out of range: " + std::to_string(nu));
  }
  SectorBasis b;
  b.L = lattice.size();
  b.nu = nu;
  b.kind = BasisKind::zero_momentum;
  b.filter = filter;
  for_each_combination(lattice.sites(), nu, [&](Configuration c) {
    // The filter is translation invariant, so testing the representative suffices.
    if (translation_representative(c, lattice) != c || !keep(c, filter, lattice)) {
      return;
    }
    if (b.configs.size() >= cap) {
      throw ConfigError("sector basis exceeds the cap of " + std::to_string(cap) + " states");
    }
    b.index.emplace(c, b.configs.size());
    b.configs.push_back(c);
    b.orbit_sizes.push_back(translation_orbit_size(c, lattice));
  });
  return b;
}

SectorBasis site_basis(int L) {
  if (L < 2) {
    throw std::invalid_argument("lattice size must be >= 2");
  }
  SectorBasis b;
  b.L = L;
  b.nu = 1;
  b.kind = BasisKind::sites;
  return b;
}

SectorBasis displacement_basis(int L, bool identify_inversion) {
  SectorBasis b;
  b.L = L;
  b.nu = 2;
  b.kind = BasisKind::displacements;
  b.identify_inversion = identify_inversion;
  for (const auto& cls : enumerate_displacements(L, identify_inversion)) {
    b.displacements.push_back(cls.rep);
    b.orbit_sizes.push_back(cls.orbit_size);
  }
  return b;
}

}  // namespace lrising
