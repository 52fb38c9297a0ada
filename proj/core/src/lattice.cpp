#include "lrising/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lrising {

double Displacement::length() const { return std::sqrt(static_cast<double>(norm2())); }

int canonical_component(int c, int L) {
  int m = ((c % L) + L) % L;
  return m > L / 2 ? m - L : m;
}

double power_law(int norm2, double alpha) {
  if (norm2 == 0) {
    return 0.0;
  }
  if (alpha == kNearestNeighbourLimit) {
    return norm2 == 1 ? 1.0 : 0.0;
  }
  return std::pow(static_cast<double>(norm2), -0.5 * alpha);
}

Displacement min_image_disp(int site_i, int site_j, int L) {
  if (L < 2) {
    throw std::invalid_argument("lattice size must be >= 2");
  }
  const int n = L * L;
  if (site_i < 0 || site_i >= n || site_j < 0 || site_j >= n) {
    throw std::out_of_range("site index out of range [0, " + std::to_string(n) + ")");
  }
  const int dx = site_j / L - site_i / L;
  const int dy = site_j % L - site_i % L;
  return {canonical_component(dx, L), canonical_component(dy, L)};
}

double kac_norm(int L, double alpha) {
  if (L < 2) {
    throw std::invalid_argument("lattice size must be >= 2");
  }
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("power-law exponent must be positive");
  }
  // Every site sees the same set of displacements, so sum_{i<j} = L^2/2 * sum_d.
  double per_site = 0.0;
  for (int x = 0; x < L; ++x) {
    for (int y = 0; y < L; ++y) {
      const Displacement d{canonical_component(x, L), canonical_component(y, L)};
      per_site += power_law(d.norm2(), alpha);
    }
  }
  const double n = static_cast<double>(L) * L;
  return 0.5 * n * per_site / (n - 1.0);
}

std::vector<DisplacementClass> enumerate_displacements(int L, bool identify_inversion) {
  if (L < 2) {
    throw std::invalid_argument("lattice size must be >= 2");
  }
  std::vector<DisplacementClass> out;
  out.reserve(static_cast<std::size_t>(L) * L);
  for (int x = 0; x < L; ++x) {
    for (int y = 0; y < L; ++y) {
      const Displacement d{canonical_component(x, L), canonical_component(y, L)};
      if (d.is_zero()) {
        continue;
      }
      if (!identify_inversion) {
        out.push_back({d, 1});
        continue;
      }
      const Displacement inv{canonical_component(-d.dx, L), canonical_component(-d.dy, L)};
      if (inv == d) {
        out.push_back({d, 1});
      } else if (inv < d) {
        out.push_back({d, 2});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const DisplacementClass& a, const DisplacementClass& b) {
    const int na = a.rep.norm2();
    const int nb = b.rep.norm2();
    if (na != nb) {
      return na < nb;
    }
    return a.rep < b.rep;
  });
  return out;
}

Lattice::Lattice(int L, double alpha) : L_(L), alpha_(alpha) {
  if (L < 2) {
    throw std::invalid_argument("lattice size must be >= 2");
  }
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("power-law exponent must be positive");
  }
  kac_ = kac_norm(L, alpha);
  table_.resize(static_cast<std::size_t>(L) * L);
  for (int x = 0; x < L; ++x) {
    for (int y = 0; y < L; ++y) {
      const Displacement d{canonical_component(x, L), canonical_component(y, L)};
      table_[static_cast<std::size_t>(x) * L + y] = power_law(d.norm2(), alpha);
    }
  }
}

int Lattice::site(int x, int y) const {
  return (((x % L_) + L_) % L_) * L_ + ((y % L_) + L_) % L_;
}

int Lattice::translate(int s, Displacement t) const {
  const auto [x, y] = coords(s);
  return site(x + t.dx, y + t.dy);
}

Displacement Lattice::canonical(Displacement d) const {
  return {canonical_component(d.dx, L_), canonical_component(d.dy, L_)};
}

Displacement Lattice::displacement(int i, int j) const { return min_image_disp(i, j, L_); }

std::size_t Lattice::index(Displacement d) const {
  const int x = ((d.dx % L_) + L_) % L_;
  const int y = ((d.dy % L_) + L_) % L_;
  return static_cast<std::size_t>(x) * L_ + y;
}

int Lattice::max_norm2() const {
  const int h = L_ / 2;
  return 2 * h * h;
}

}  // namespace lrising
