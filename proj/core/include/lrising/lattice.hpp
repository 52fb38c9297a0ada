#pragma once

// Periodic L x L square lattice with power-law couplings r^-alpha and the
// Kac normalisation constant. Sites are numbered site = x * L + y.

#include <compare>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace lrising {

/// Sentinel exponent for the nearest-neighbour limit: r^-alpha is 1 at r = 1
/// and 0 otherwise.
inline constexpr double kNearestNeighbourLimit = std::numeric_limits<double>::infinity();

/// Relative lattice vector. Canonical form has both components in (-L/2, L/2].
struct Displacement {
  int dx = 0;
  int dy = 0;

  constexpr int norm2() const { return dx * dx + dy * dy; }
  double length() const;
  constexpr bool is_zero() const { return dx == 0 && dy == 0; }
  constexpr Displacement operator-() const { return {-dx, -dy}; }
  constexpr Displacement operator-(Displacement o) const { return {dx - o.dx, dy - o.dy}; }
  constexpr Displacement operator+(Displacement o) const { return {dx + o.dx, dy + o.dy}; }

  friend constexpr bool operator==(Displacement, Displacement) = default;
  friend constexpr auto operator<=>(Displacement, Displacement) = default;
};

/// One element of a displacement basis. With inversion identification the
/// representative stands for {d, -d}; `orbit_size` is 2, or 1 when d == -d.
struct DisplacementClass {
  Displacement rep;
  int orbit_size = 1;
};

/// Maps an integer component into (-L/2, L/2].
int canonical_component(int c, int L);

class Lattice {
 public:
  /// Throws std::invalid_argument for L < 2 or alpha <= 0 (NaN included).
  Lattice(int L, double alpha);

  int size() const { return L_; }
  int sites() const { return L_ * L_; }
  double alpha() const { return alpha_; }
  double kac() const { return kac_; }
  bool nearest_neighbour_limit() const { return alpha_ == kNearestNeighbourLimit; }

  int site(int x, int y) const;
  std::pair<int, int> coords(int site) const { return {site / L_, site % L_}; }
  int translate(int site, Displacement t) const;

  Displacement canonical(Displacement d) const;
  /// Minimum-image displacement from site i to site j.
  Displacement displacement(int i, int j) const;

  /// r^-alpha for a displacement (any representative); zero for d == 0.
  double coupling(Displacement d) const { return table_[index(d)]; }
  double coupling(int i, int j) const { return coupling(displacement(i, j)); }

  /// Largest squared minimum-image distance on this torus.
  int max_norm2() const;

 private:
  std::size_t index(Displacement d) const;

  int L_;
  double alpha_;
  double kac_;
  std::vector<double> table_;  // indexed by (dx mod L) * L + (dy mod L)
};

/// r^-alpha evaluated from a squared integer distance.
double power_law(int norm2, double alpha);

Displacement min_image_disp(int site_i, int site_j, int L);

/// N_alpha = (L^2 - 1)^-1 * sum_{i<j} r_ij^-alpha under the minimum-image metric.
double kac_norm(int L, double alpha);

/// All L^2 - 1 nonzero canonical displacements, ordered by (|d|^2, dx, dy).
/// With `identify_inversion` one representative per {d, -d} orbit is kept
/// (the lexicographically larger member).
std::vector<DisplacementClass> enumerate_displacements(int L, bool identify_inversion);

}  // namespace lrising
