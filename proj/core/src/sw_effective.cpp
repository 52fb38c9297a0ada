#include "lrising/sw_effective.hpp"

#include <bit>
#include <cmath>
#include <exception>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "lrising/errors.hpp"

namespace lrising {

std::string to_string(SwMode mode) {
  switch (mode) {
    case SwMode::full:
      return "full";
    case SwMode::asymptotic:
      return "asymptotic";
    case SwMode::generic_sw:
      return "generic_sw";
  }
  return "?";
}

SwMode parse_sw_mode(const std::string& text) {
  if (text == "full") return SwMode::full;
  if (text == "asymptotic") return SwMode::asymptotic;
  if (text == "generic_sw" || text == "generic") return SwMode::generic_sw;
  throw ConfigError("unknown effective-Hamiltonian mode '" + text + "'");
}

double polarized_energy(const Lattice& lattice, double J) {
  return -0.5 * J * (lattice.sites() - 1);
}

double magnon_cost(const Lattice& lattice, double J) {
  return 2.0 * J * (1.0 - 1.0 / lattice.sites());
}

double magnon_energy(Configuration c, const Lattice& lattice, double J) {
  const double scale = 2.0 * J / lattice.kac();
  double pairs = 0.0;
  int nu = 0;
  Configuration rest = c;
  while (rest != 0) {
    const int s = std::countr_zero(rest);
    rest &= rest - 1;
    ++nu;
    Configuration others = rest;
    while (others != 0) {
      const int t = std::countr_zero(others);
      others &= others - 1;
      pairs += lattice.coupling(s, t);
    }
  }
  return polarized_energy(lattice, J) + nu * magnon_cost(lattice, J) - scale * pairs;
}

double e0_effective(const Lattice& lattice, double J, double g) {
  if (!(J > 0.0)) {
    throw ConfigError("J must be positive");
  }
  return polarized_energy(lattice, J) - g * g * lattice.sites() / (4.0 * magnon_cost(lattice, J));
}

namespace {

/// Tables shared by the closed-form builders.
class Terms {
 public:
  Terms(const Lattice& lattice, double J, double g, const SwOptions& options)
      : lattice_(lattice), J_(J), g2_(g * g), L_(lattice.size()), n_(lattice.sites()) {
    if (!(J > 0.0)) {
      throw ConfigError("J must be positive");
    }
    eps_ = magnon_cost(lattice, J);
    guard_ = options.eps_sw * J;
    x_.resize(static_cast<std::size_t>(n_));
    for (int a = 0; a < L_; ++a) {
      for (int b = 0; b < L_; ++b) {
        x_[static_cast<std::size_t>(a) * L_ + b] =
            2.0 * J / lattice.kac() * lattice.coupling(Displacement{a, b});
      }
    }
  }

  double eps() const { return eps_; }
  double g2() const { return g2_; }
  double J() const { return J_; }
  int sites() const { return n_; }
  const Lattice& lattice() const { return lattice_; }
  /// sum_{d != 0} f(x_d)
  double f_sum() const {
    double sum = 0.0;
    for (int i = 1; i < n_; ++i) {
      sum += f(x_[static_cast<std::size_t>(i)]);
    }
    return sum;
  }

  std::size_t idx(Displacement d) const {
    const int a = ((d.dx % L_) + L_) % L_;
    const int b = ((d.dy % L_) + L_) % L_;
    return static_cast<std::size_t>(a) * L_ + b;
  }
  double x(Displacement d) const { return x_[idx(d)]; }
  double x(std::size_t i) const { return x_[i]; }

  double f(double s) const {
    const double den = eps_ - s;
    if (std::abs(den) < guard_) {
      throw SwDegeneracyError("second-order denominator " + std::to_string(den) +
                              " below the degeneracy guard (pair binding " + std::to_string(s) +
                              " against magnon cost " + std::to_string(eps_) + ")");
    }
    return 1.0 / den;
  }

  double h1_diagonal() const {
    return polarized_energy(lattice_, J_) + eps_ + 0.25 * g2_ * (1.0 / eps_ - f_sum());
  }
  double h1_hop(Displacement d) const { return 0.25 * g2_ * (1.0 / eps_ - f(x(d))); }

  /// U(d) = -x_d + g^2 (f(x_d) - 1/eps) - (g^2/4) R(d), where
  /// R(d) = sum_{s != 0, d} [f(x_s + x_{d-s}) - f(x_s) - f(x_{d-s}) + 1/eps].
  /// Algebraically identical to (diagonal - E_2) but free of the O(N / eps)
  /// cancellation between the two.
  double u_full(Displacement d) const {
    const std::size_t id = idx(d);
    const double xd = x_[id];
    double r = 0.0;
    const double inv = 1.0 / eps_;
    for (int a = 0; a < L_; ++a) {
      for (int b = 0; b < L_; ++b) {
        const Displacement s{a, b};
        const std::size_t is = idx(s);
        const std::size_t ir = idx(d - s);
        if (is == 0 || ir == 0) {
          continue;
        }
        r += f(x_[is] + x_[ir]) - f(x_[is]) - f(x_[ir]) + inv;
      }
    }
    return -xd + g2_ * (f(xd) - inv) - 0.25 * g2_ * r;
  }

  double hop_full(Displacement d, Displacement dp) const {
    const double xd = x(d);
    const double xdp = x(dp);
    const double xr = x(d - dp);
    return 0.125 * g2_ * ((f(xd) + f(xdp)) - (f(xdp + xr) + f(xd + xr)));
  }

  double e2_full() const {
    const double c = g2_ / (2.0 * eps_) - 0.5 * g2_ * f_sum() + g2_ * n_ / (4.0 * eps_);
    return polarized_energy(lattice_, J_) + 2.0 * eps_ + c;
  }

 private:
  const Lattice& lattice_;
  double J_;
  double g2_;
  int L_;
  int n_;
  double eps_ = 0.0;
  double guard_ = 0.0;
  std::vector<double> x_;
};

double kac_coupling(const Lattice& lattice, Displacement d) {
  return lattice.coupling(d) / lattice.kac();
}

double h1_asym_diagonal(const Lattice& lattice, double J, double g) {
  return polarized_energy(lattice, J) + 2.0 * J - g * g * lattice.sites() / (8.0 * J);
}

double h1_asym_hop(const Lattice& lattice, double J, double g, Displacement d) {
  return -g * g / (8.0 * J) * kac_coupling(lattice, d);
}

void require_nonzero(Displacement d, const Lattice& lattice, const char* what) {
  if (lattice.canonical(d).is_zero()) {
    throw std::invalid_argument(std::string(what) + ": displacement must be nonzero");
  }
}

}  // namespace

EffectiveHamiltonian build_h1(const Lattice& lattice, double J, double g, SwMode mode,
                              const SwOptions& options) {
  if (mode == SwMode::generic_sw) {
    return build_sector_generic(position_basis(lattice, 1), lattice, J, g, options);
  }
  const int n = lattice.sites();
  EffectiveHamiltonian H;
  H.basis = site_basis(lattice.size());
  H.mode = mode;
  H.matrix.resize(n, n);
  std::vector<double> hop(static_cast<std::size_t>(n));
  double diag = 0.0;
  if (mode == SwMode::full) {
    const Terms t(lattice, J, g, options);
    diag = t.h1_diagonal();
    for (int s = 1; s < n; ++s) {
      const auto [a, b] = lattice.coords(s);
      hop[s] = t.h1_hop(Displacement{a, b});
    }
  } else {
    diag = h1_asym_diagonal(lattice, J, g);
    for (int s = 1; s < n; ++s) {
      const auto [a, b] = lattice.coords(s);
      hop[s] = h1_asym_hop(lattice, J, g, Displacement{a, b});
    }
  }
  H.constant = diag;
  for (int i = 0; i < n; ++i) {
    const auto [xi, yi] = lattice.coords(i);
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        H.matrix(i, j) = diag;
        continue;
      }
      const auto [xj, yj] = lattice.coords(j);
      const int k = lattice.site(xj - xi, yj - yi);
      H.matrix(i, j) = hop[static_cast<std::size_t>(k)];
    }
  }
  return H;
}

EffectiveHamiltonian build_h1_zero_momentum(const Lattice& lattice, double J, double g,
                                            SwMode mode, const SwOptions& options) {
  if (mode == SwMode::generic_sw) {
    return build_sector_generic(zero_momentum_basis(lattice, 1), lattice, J, g, options);
  }
  EffectiveHamiltonian H;
  H.basis.L = lattice.size();
  H.basis.nu = 1;
  H.basis.kind = BasisKind::zero_momentum;
  H.basis.configs = {Configuration{1}};
  H.basis.orbit_sizes = {lattice.sites()};
  H.basis.index.emplace(Configuration{1}, 0);
  H.mode = mode;
  H.constant = polarized_energy(lattice, J);
  H.matrix.resize(1, 1);
  H.matrix(0, 0) = H.constant + dispersion(lattice, J, g, Momentum{0, 0}, mode, options);
  return H;
}

double dispersion(const Lattice& lattice, double J, double g, Momentum k, SwMode mode,
                  const SwOptions& options) {
  const int L = lattice.size();
  const int n = lattice.sites();
  const double kx = 2.0 * std::numbers::pi * k.nx / L;
  const double ky = 2.0 * std::numbers::pi * k.ny / L;
  double value = 0.0;
  double hops = 0.0;
  if (mode == SwMode::asymptotic) {
    value = h1_asym_diagonal(lattice, J, g) - polarized_energy(lattice, J);
    for (int s = 1; s < n; ++s) {
      const auto [a, b] = lattice.coords(s);
      const Displacement d = lattice.canonical(Displacement{a, b});
      hops += h1_asym_hop(lattice, J, g, d) * std::cos(kx * d.dx + ky * d.dy);
    }
    return value + hops;
  }
  if (mode == SwMode::generic_sw) {
    throw std::invalid_argument("dispersion: use the full or asymptotic closed form");
  }
  const Terms t(lattice, J, g, options);
  value = t.h1_diagonal() - polarized_energy(lattice, J);
  for (int s = 1; s < n; ++s) {
    const auto [a, b] = lattice.coords(s);
    const Displacement d = lattice.canonical(Displacement{a, b});
    hops += t.h1_hop(d) * std::cos(kx * d.dx + ky * d.dy);
  }
  return value + hops;
}

double pair_overlap_integral(double alpha) {
  if (!(alpha > 1.0) || alpha == kNearestNeighbourLimit) {
    return 0.0;
  }
  // Polar coordinates about the origin; for 1/2 < r < 3/2 the angular range
  // excludes the disk |r - e| < 1/2, i.e. cos(theta) > (r^2 + 3/4) / (2 r).
  auto angular = [alpha](double r) {
    const double c = (r * r + 0.75) / (2.0 * r);
    const double theta0 = c >= 1.0 ? 0.0 : std::acos(c);
    auto integrand = [alpha, r](double theta) {
      const double dist2 = r * r - 2.0 * r * std::cos(theta) + 1.0;
      return std::pow(dist2, -0.5 * alpha);
    };
    const double inner = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, theta0, std::numbers::pi, 15, 1e-13);
    return 2.0 * inner * r * std::pow(r, -alpha);
  };
  boost::math::quadrature::tanh_sinh<double> near;
  const double part_near = near.integrate(angular, 0.5, 1.5, 1e-12);
  boost::math::quadrature::exp_sinh<double> far;
  const double part_far = far.integrate([&](double u) { return angular(1.5 + u); }, 1e-12);
  return part_near + part_far;
}

namespace {

double delta_u_given(double F, Displacement d, const Lattice& lattice, double J, double g) {
  if (F == 0.0) {
    return 0.0;
  }
  const double r2 = lattice.canonical(d).norm2();
  const double kac = lattice.kac();
  return -g * g * F / (8.0 * J * kac * kac) * std::pow(r2, -(lattice.alpha() - 1.0));
}

}  // namespace

double delta_u(Displacement d, const Lattice& lattice, double J, double g) {
  require_nonzero(d, lattice, "delta_u");
  return delta_u_given(pair_overlap_integral(lattice.alpha()), d, lattice, J, g);
}

double u_potential(Displacement d, const Lattice& lattice, double J, double g, SwMode mode,
                   const SwOptions& options) {
  require_nonzero(d, lattice, "u_potential");
  switch (mode) {
    case SwMode::full:
      return Terms(lattice, J, g, options).u_full(lattice.canonical(d));
    case SwMode::asymptotic:
      return -(2.0 * J - g * g / (2.0 * J)) * kac_coupling(lattice, d) + delta_u(d, lattice, J, g);
    case SwMode::generic_sw:
      break;
  }
  throw std::invalid_argument("u_potential: use the full or asymptotic closed form");
}

double pair_hop(Displacement d, Displacement dp, const Lattice& lattice, double J, double g,
                SwMode mode, const SwOptions& options) {
  require_nonzero(d, lattice, "pair_hop");
  require_nonzero(dp, lattice, "pair_hop");
  if (lattice.canonical(d) == lattice.canonical(dp)) {
    throw std::invalid_argument("pair_hop: displacements must differ");
  }
  switch (mode) {
    case SwMode::full:
      return Terms(lattice, J, g, options).hop_full(d, dp);
    case SwMode::asymptotic:
      return -g * g / (8.0 * J) * kac_coupling(lattice, d - dp);
    case SwMode::generic_sw:
      break;
  }
  throw std::invalid_argument("pair_hop: use the full or asymptotic closed form");
}

double two_magnon_constant(const Lattice& lattice, double J, double g, SwMode mode) {
  if (mode == SwMode::asymptotic) {
    return polarized_energy(lattice, J) + 4.0 * J - g * g * lattice.sites() / (8.0 * J);
  }
  return Terms(lattice, J, g, SwOptions{}).e2_full();
}

EffectiveHamiltonian build_h2(const Lattice& lattice, double J, double g, SwMode mode,
                              bool identify_inversion, const SwOptions& options) {
  if (mode == SwMode::generic_sw) {
    return build_sector_generic(zero_momentum_basis(lattice, 2), lattice, J, g, options);
  }
  EffectiveHamiltonian H;
  H.basis = displacement_basis(lattice.size(), identify_inversion);
  H.mode = mode;
  const auto m = static_cast<Eigen::Index>(H.basis.size());
  const Terms terms(lattice, J, g, options);
  const bool full = mode == SwMode::full;
  H.constant = full ? terms.e2_full() : two_magnon_constant(lattice, J, g, mode);

  // Orbit members of every basis element.
  std::vector<std::vector<Displacement>> orbit(static_cast<std::size_t>(m));
  for (Eigen::Index a = 0; a < m; ++a) {
    const Displacement d = H.basis.displacements[a];
    orbit[a].push_back(d);
    if (H.basis.orbit_sizes[a] == 2) {
      orbit[a].push_back(lattice.canonical(-d));
    }
  }
  std::vector<double> potential(static_cast<std::size_t>(lattice.sites()), 0.0);
  const double F = full ? 0.0 : pair_overlap_integral(lattice.alpha());
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 16)
  for (Eigen::Index a = 0; a < m; ++a) {
    try {
      for (const auto& d : orbit[a]) {
        potential[terms.idx(d)] = full ? terms.u_full(d)
                                       : -(2.0 * J - g * g / (2.0 * J)) * kac_coupling(lattice, d) +
                                             delta_u_given(F, d, lattice, J, g);
      }
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  auto element = [&](Displacement p, Displacement q) {
    if (p == q) {
      return H.constant + potential[terms.idx(p)];
    }
    const double hop = full ? terms.hop_full(p, q) : -g * g / (8.0 * J) * kac_coupling(lattice, p - q);
    return 2.0 * hop;
  };

  H.matrix.resize(m, m);
#pragma omp parallel for schedule(dynamic, 16)
  for (Eigen::Index a = 0; a < m; ++a) {
    try {
      for (Eigen::Index b = a; b < m; ++b) {
        double sum = 0.0;
        for (const auto& p : orbit[a]) {
          for (const auto& q : orbit[b]) {
            sum += element(p, q);
          }
        }
        const double value = sum / std::sqrt(static_cast<double>(orbit[a].size() * orbit[b].size()));
        H.matrix(a, b) = value;
        H.matrix(b, a) = value;
      }
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return H;
}

EigenSolution diagonalize(const EffectiveHamiltonian& H) { return symmetric_eigensolve(H.matrix); }

}  // namespace lrising
