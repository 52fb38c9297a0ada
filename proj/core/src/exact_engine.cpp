#include "lrising/exact_engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "lrising/eigensolver.hpp"
#include "lrising/errors.hpp"
#include "lrising/krylov.hpp"
#include "lrising/observables.hpp"

namespace lrising {

namespace {

constexpr double kGrid = 1e-9;  // slack when comparing record times

void check_sites(const Lattice& lattice, const EngineLimits& limits) {
  const int n = lattice.sites();
  if (n > limits.max_sites || n > 62) {
    throw BudgetError("lattice with " + std::to_string(n) + " sites exceeds the limit of " +
                          std::to_string(limits.max_sites) + " sites",
                      std::ldexp(8.0, std::min(n, 62)));
  }
  const double diag_bytes = std::ldexp(8.0, n);
  if (diag_bytes > limits.memory_budget_bytes) {
    throw BudgetError("diagonal needs " + std::to_string(diag_bytes) + " bytes", diag_bytes);
  }
}

template <typename T>
void apply_impl(const FullHamiltonian& H, std::span<const T> in, std::span<T> out) {
  const auto dim = static_cast<std::int64_t>(H.dimension());
  if (static_cast<std::int64_t>(in.size()) != dim || static_cast<std::int64_t>(out.size()) != dim) {
    throw std::invalid_argument("apply: vector length does not match Hilbert-space dimension");
  }
  const auto diag = H.diagonal();
  const double a = H.flip_amplitude();
  const int n = H.sites();
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < dim; ++c) {
    T acc = T(0);
    for (int k = 0; k < n; ++k) {
      acc += in[static_cast<std::size_t>(c ^ (std::int64_t{1} << k))];
    }
    out[static_cast<std::size_t>(c)] = diag[static_cast<std::size_t>(c)] * in[c] + a * acc;
  }
}

}  // namespace

double classical_energy(SpinConfig config, const Lattice& lattice, double J) {
  const int n = lattice.sites();
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const int si = ((config >> i) & 1U) ? 1 : -1;
    for (int j = i + 1; j < n; ++j) {
      const int sj = ((config >> j) & 1U) ? 1 : -1;
      sum += si * sj * lattice.coupling(i, j);
    }
  }
  // sum_{i != j} s_i s_j / 4 = sum_{i<j} s_i s_j / 2
  return -J / lattice.kac() * 0.5 * sum;
}

double estimate_memory_bytes(int sites, int krylov_dim) {
  const double dim = std::ldexp(1.0, sites);
  // diagonal + state + Krylov basis + two work vectors
  return dim * (8.0 + 16.0 + 16.0 * krylov_dim + 2 * 16.0);
}

FullHamiltonian::FullHamiltonian(const Lattice& lattice, double J, double g,
                                 const EngineLimits& limits)
    : lattice_(lattice), J_(J), g_(g) {
  check_sites(lattice, limits);
  const int n = lattice.sites();
  const std::size_t dim = std::size_t{1} << n;
  diagonal_.assign(dim, 0.0);

  std::vector<double> w(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      w[static_cast<std::size_t>(i) * n + j] = lattice.coupling(i, j);
    }
  }
  // Local fields h_k = sum_j w_kj s_j, starting from all spins down.
  std::vector<double> h(static_cast<std::size_t>(n), 0.0);
  std::vector<int> s(static_cast<std::size_t>(n), -1);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      h[k] -= w[static_cast<std::size_t>(k) * n + j];
    }
  }
  const double scale = J / lattice.kac();
  double energy = -0.5 * J * (n - 1);
  diagonal_[0] = energy;
  // Gray-code walk: step m flips bit ctz(m).
  for (std::size_t m = 1; m < dim; ++m) {
    const int k = std::countr_zero(m);
    energy += scale * s[k] * h[k];
    const double delta = -2.0 * s[k];
    s[k] = -s[k];
    const double* wk = &w[static_cast<std::size_t>(k) * n];
    for (int j = 0; j < n; ++j) {
      h[j] += delta * wk[j];
    }
    diagonal_[m ^ (m >> 1)] = energy;
  }
}

void FullHamiltonian::apply(std::span<const double> in, std::span<double> out) const {
  apply_impl<double>(*this, in, out);
}

void FullHamiltonian::apply(std::span<const Complex> in, std::span<Complex> out) const {
  apply_impl<Complex>(*this, in, out);
}

std::pair<double, double> FullHamiltonian::spectral_bounds() const {
  const auto [lo, hi] = std::minmax_element(diagonal_.begin(), diagonal_.end());
  const double radius = std::abs(flip_amplitude()) * sites();
  return {*lo - radius, *hi + radius};
}

Eigen::MatrixXd FullHamiltonian::dense() const {
  const auto dim = static_cast<Eigen::Index>(dimension());
  if (dim > 16384) {
    throw BudgetError("dense matrix of dimension " + std::to_string(dim) + " refused",
                      8.0 * static_cast<double>(dim) * static_cast<double>(dim));
  }
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim, dim);
  const double a = flip_amplitude();
  for (Eigen::Index c = 0; c < dim; ++c) {
    M(c, c) = diagonal_[static_cast<std::size_t>(c)];
    for (int k = 0; k < sites(); ++k) {
      M(c ^ (Eigen::Index{1} << k), c) = a;
    }
  }
  return M;
}

FullHamiltonian build_hamiltonian(const Lattice& lattice, double J, double g,
                                  const EngineLimits& limits) {
  return FullHamiltonian(lattice, J, g, limits);
}

StateVector polarized_state(const FullHamiltonian& H) {
  StateVector s;
  s.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(H.dimension()));
  s.amplitudes[0] = 1.0;
  return s;
}

namespace {

HermitianOperator as_operator(const FullHamiltonian& H) {
  return [&H](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
    y.resize(x.size());
    H.apply(std::span<const Complex>(x.data(), static_cast<std::size_t>(x.size())),
            std::span<Complex>(y.data(), static_cast<std::size_t>(y.size())));
  };
}

double expectation(const FullHamiltonian& H, const Eigen::VectorXcd& psi, Eigen::VectorXcd& work) {
  as_operator(H)(psi, work);
  return psi.dot(work).real();
}

}  // namespace

StateVector propagate(const StateVector& state, const FullHamiltonian& H, double dt,
                      int krylov_dim, double tol) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("propagate: dt must be positive");
  }
  if (state.amplitudes.size() != static_cast<Eigen::Index>(H.dimension())) {
    throw std::invalid_argument("propagate: state length does not match Hamiltonian");
  }
  if (std::abs(state.amplitudes.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("propagate: state is not normalised");
  }
  const LanczosExponential krylov(as_operator(H), state.amplitudes, krylov_dim);
  const double step = krylov.admissible_step(tol, dt);
  if (step < dt) {
    const int pieces = step > 0.0 ? static_cast<int>(std::ceil(dt / step)) : -1;
    throw KrylovToleranceError("Krylov dimension " + std::to_string(krylov_dim) +
                                   " cannot reach tolerance over dt; split into " +
                                   std::to_string(pieces) + " substeps",
                               pieces);
  }
  StateVector out;
  out.amplitudes = krylov.evaluate(dt);
  out.time = state.time + dt;
  if (std::abs(out.amplitudes.norm() - 1.0) > 1e-9) {
    throw NumericalError("propagate: norm drifted beyond 1e-9");
  }
  return out;
}

TimeSeries run_quench(const Lattice& lattice, double J, double g, const QuenchOptions& options,
                      const EngineLimits& limits) {
  if (!(options.dt_record > 0.0) || options.t_max < 0.0) {
    throw std::invalid_argument("run_quench: need dt_record > 0 and t_max >= 0");
  }
  const double need = estimate_memory_bytes(lattice.sites(), options.krylov_dim);
  if (lattice.sites() > limits.max_sites || need > limits.memory_budget_bytes) {
    throw BudgetError("quench on " + std::to_string(lattice.sites()) + " sites needs about " +
                          std::to_string(need / 1e9) + " GB",
                      need);
  }
  const FullHamiltonian H(lattice, J, g, limits);
  const HermitianOperator op = as_operator(H);
  const int L = lattice.size();

  TimeSeries ts;
  ts.L = L;
  ts.J = J;
  ts.g = g;
  ts.alpha = lattice.alpha();
  ts.kac = lattice.kac();
  ts.dt = options.dt_record;

  StateVector state = options.initial ? *options.initial : polarized_state(H);
  const double t0 = state.time;
  const auto steps = static_cast<std::size_t>(std::floor((options.t_max - t0) / options.dt_record + kGrid));
  const std::size_t records = options.t_max + kGrid >= t0 ? steps + 1 : 0;
  const int half = L / 2;
  ts.corr.resize(static_cast<Eigen::Index>(records), half);
  ts.corr_normalized.resize(static_cast<Eigen::Index>(records), half);
  const double norm_factor = g != 0.0 ? 8.0 * lattice.kac() * J * J / (g * g) : 0.0;

  Eigen::VectorXcd work(state.amplitudes.size());
  auto record = [&](const StateVector& s, std::size_t n) {
    const ZMeasurement m = measure_z(s.amplitudes, L);
    ts.times.push_back(s.time);
    ts.sz_site_avg.push_back(m.sz_site_avg);
    ts.energy.push_back(expectation(H, s.amplitudes, work));
    ts.norm.push_back(s.amplitudes.norm());
    for (int d = 1; d <= half; ++d) {
      ts.corr(static_cast<Eigen::Index>(n), d - 1) = m.connected[d];
      ts.corr_normalized(static_cast<Eigen::Index>(n), d - 1) = m.connected[d] * norm_factor;
    }
    if (options.on_record) {
      options.on_record(s, n);
    }
  };

  if (records == 0) {
    return ts;
  }
  record(state, 0);
  std::size_t next = 1;
  while (next < records) {
    const LanczosExponential krylov(op, state.amplitudes, options.krylov_dim);
    const double remaining = t0 + static_cast<double>(records - 1) * options.dt_record - state.time;
    const double h = krylov.admissible_step(options.tol, remaining);
    if (!(h > 1e-12 * std::max(1.0, remaining))) {
      throw KrylovToleranceError("quench: Krylov step collapsed; increase krylov_dim", -1);
    }
    bool advanced = false;
    while (next < records) {
      const double tn = t0 + static_cast<double>(next) * options.dt_record;
      if (tn - state.time > h + kGrid) {
        break;
      }
      StateVector s{krylov.evaluate(tn - state.time), tn};
      record(s, next);
      ++next;
      if (next == records || t0 + static_cast<double>(next) * options.dt_record - state.time > h + kGrid) {
        state = std::move(s);
        advanced = true;
        break;
      }
    }
    if (!advanced) {
      state.amplitudes = krylov.evaluate(h);
      state.time += h;
    }
  }
  return ts;
}

std::vector<Eigenpair> exact_eigenpairs(const FullHamiltonian& H, int k,
                                        const ExactEigenOptions& options) {
  const auto dim = static_cast<Eigen::Index>(H.dimension());
  if (k < 1 || k > dim) {
    throw std::invalid_argument("exact_eigenpairs: k out of range");
  }
  auto apply = [&H](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    y.resize(x.size());
    H.apply(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
            std::span<double>(y.data(), static_cast<std::size_t>(y.size())));
  };

  std::vector<Eigenpair> out;
  if (static_cast<std::size_t>(dim) <= options.dense_max_dim) {
    const EigenSolution sol = symmetric_eigensolve(H.dense());
    Eigen::VectorXd Hv;
    for (int i = 0; i < k; ++i) {
      Eigenpair p{sol.values[i], sol.vectors.col(i)};
      apply(p.vector, Hv);
      const double res = (Hv - p.energy * p.vector).norm();
      if (res > options.tol) {
        throw ConvergenceError("dense eigenpair residual " + std::to_string(res), res);
      }
      out.push_back(std::move(p));
    }
    return out;
  }

  // Explicitly restarted Lanczos with locking: each pass converges the lowest
  // eigenpair in the complement of the already locked vectors.
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  const int m = static_cast<int>(std::min<Eigen::Index>(options.krylov_dim, dim - k + 1));
  std::vector<Eigen::VectorXd> locked;
  auto deflate = [&locked](Eigen::VectorXd& v) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : locked) {
        v -= u * u.dot(v);
      }
    }
  };

  for (int want = 0; want < k; ++want) {
    Eigen::VectorXd start(dim);
    for (Eigen::Index i = 0; i < dim; ++i) start[i] = normal(rng);
    deflate(start);
    start.normalize();
    double residual = 0.0;
    bool converged = false;
    Eigenpair best;
    for (int restart = 0; restart < options.max_restarts && !converged; ++restart) {
      std::vector<Eigen::VectorXd> Q{start};
      std::vector<double> alpha;
      std::vector<double> beta;
      Eigen::VectorXd w;
      for (int j = 0; j < m; ++j) {
        apply(Q[j], w);
        alpha.push_back(Q[j].dot(w));
        deflate(w);
        for (int pass = 0; pass < 2; ++pass) {
          for (const auto& q : Q) w -= q * q.dot(w);
        }
        const double b = w.norm();
        if (j + 1 == m || b < 1e-12) {
          break;
        }
        beta.push_back(b);
        Q.push_back(w / b);
      }
      const auto sz = static_cast<Eigen::Index>(alpha.size());
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(sz, sz);
      for (Eigen::Index i = 0; i < sz; ++i) {
        T(i, i) = alpha[i];
        if (i + 1 < sz) {
          T(i, i + 1) = T(i + 1, i) = beta[i];
        }
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
      Eigen::VectorXd ritz = Eigen::VectorXd::Zero(dim);
      for (Eigen::Index i = 0; i < sz; ++i) ritz += es.eigenvectors()(i, 0) * Q[i];
      deflate(ritz);
      ritz.normalize();
      Eigen::VectorXd Hr;
      apply(ritz, Hr);
      const double theta = ritz.dot(Hr);
      residual = (Hr - theta * ritz).norm();
      best = {theta, ritz};
      converged = residual <= options.tol;
      start = ritz;
    }
    if (!converged) {
      throw ConvergenceError("Lanczos did not converge for eigenpair " + std::to_string(want) +
                                 "; residual " + std::to_string(residual),
                             residual);
    }
    locked.push_back(best.vector);
    out.push_back(std::move(best));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Eigenpair& a, const Eigenpair& b) { return a.energy < b.energy; });
  return out;
}

}  // namespace lrising
