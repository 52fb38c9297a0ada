#pragma once

// Second-order Schrieffer-Wolff effective Hamiltonians of the nu = 0, 1, 2
// magnon sectors, plus a brute-force builder for arbitrary sectors.
//
// Notation used throughout (N = L^2, w(d) = |d|^-alpha):
//   eps   = 2J (1 - 1/N)            cost of one isolated magnon
//   x(d)  = 2J w(d) / N_alpha       classical pair binding
//   f(s)  = 1 / (eps - s)
//   E_nu(config) = E_0 + nu eps - sum_{pairs} x

#include <string>

#include <Eigen/Core>

#include "lrising/eigensolver.hpp"
#include "lrising/lattice.hpp"
#include "lrising/sector_basis.hpp"

namespace lrising {

enum class SwMode { full, asymptotic, generic_sw };

std::string to_string(SwMode mode);
SwMode parse_sw_mode(const std::string& text);

/// Perturbative denominators below eps_sw * J are reported as
/// SwDegeneracyError instead of being regularised.
struct SwOptions {
  double eps_sw = 1e-8;
  std::size_t basis_cap = kDefaultBasisCap;
};

/// `matrix` holds absolute energies: the sector constant is already on its
/// diagonal and is repeated in `constant` for reference.
struct EffectiveHamiltonian {
  SectorBasis basis;
  Eigen::MatrixXd matrix;
  double constant = 0.0;
  SwMode mode = SwMode::full;
};

/// Lattice momentum k = (2 pi / L) (nx, ny).
struct Momentum {
  int nx = 0;
  int ny = 0;
};

double polarized_energy(const Lattice& lattice, double J);
double magnon_cost(const Lattice& lattice, double J);
/// Unperturbed energy of a magnon configuration.
double magnon_energy(Configuration c, const Lattice& lattice, double J);

/// E_0 - g^2 N / (4 eps), the exact finite-L second-order ground energy.
double e0_effective(const Lattice& lattice, double J, double g);

/// Single-magnon hopping matrix over the N site positions (site basis).
EffectiveHamiltonian build_h1(const Lattice& lattice, double J, double g,
                              SwMode mode = SwMode::full, const SwOptions& options = {});
/// The 1 x 1 zero-momentum block of build_h1.
EffectiveHamiltonian build_h1_zero_momentum(const Lattice& lattice, double J, double g,
                                            SwMode mode = SwMode::full,
                                            const SwOptions& options = {});
/// E_1(k) - E_0.
double dispersion(const Lattice& lattice, double J, double g, Momentum k,
                  SwMode mode = SwMode::full, const SwOptions& options = {});

/// d-dependent diagonal of the two-magnon problem (sector constant excluded).
double u_potential(Displacement d, const Lattice& lattice, double J, double g,
                   SwMode mode = SwMode::full, const SwOptions& options = {});
/// Amplitude for one magnon hopping while the other stays put, d -> d'.
double pair_hop(Displacement d, Displacement dp, const Lattice& lattice, double J, double g,
                SwMode mode = SwMode::full, const SwOptions& options = {});
/// Sector constant E_2: two non-interacting dressed magnons (full) or
/// E_0 + 4J - g^2 N / 8J (asymptotic).
double two_magnon_constant(const Lattice& lattice, double J, double g,
                           SwMode mode = SwMode::full);

/// Zero-momentum two-magnon Hamiltonian in the relative coordinate. Both
/// magnons can hop, so the off-diagonal element between displacements is
/// 2 * pair_hop. With identification the element between classes [d], [d']
/// is (s_d s_d')^-1/2 sum over orbit members.
EffectiveHamiltonian build_h2(const Lattice& lattice, double J, double g,
                              SwMode mode = SwMode::full, bool identify_inversion = true,
                              const SwOptions& options = {});

/// Continuum integral int d^2r |r|^-alpha |r - e|^-alpha over the plane with
/// unit-diameter disks around 0 and e removed (lattice cutoff). Zero for
/// alpha <= 1 or the nearest-neighbour limit.
double pair_overlap_integral(double alpha);
/// Subleading asymptotic correction -g^2 F / (8 J N_alpha^2) |d|^-2(alpha-1).
double delta_u(Displacement d, const Lattice& lattice, double J, double g);

/// Generic second-order builder. Virtual states span the complete nu +- 1
/// sectors; the basis may be positions or zero_momentum.
EffectiveHamiltonian build_sector_generic(const SectorBasis& basis, const Lattice& lattice,
                                          double J, double g, const SwOptions& options = {});

/// Index in a zero-momentum nu = 2 configuration basis of the orbit that
/// corresponds to displacement d.
std::size_t zero_momentum_index(const SectorBasis& basis, Displacement d, const Lattice& lattice);

EigenSolution diagonalize(const EffectiveHamiltonian& H);

}  // namespace lrising
