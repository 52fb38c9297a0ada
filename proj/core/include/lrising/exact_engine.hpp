#pragma once

// Exact representation of
//   H = -(J/N_alpha) sum_{i != j} S^z_i S^z_j / r_ij^alpha - g sum_i S^x_i
// in the S^z configuration basis. Bit k of a configuration index is 1 when
// spin k points up (a magnon); index 0 is the fully polarised |down...down>.

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "lrising/lattice.hpp"

namespace lrising {

using Complex = std::complex<double>;
using SpinConfig = std::uint64_t;

struct EngineLimits {
  int max_sites = 25;
  double memory_budget_bytes = 4.0e9;
};

/// Classical Ising energy of a configuration, summed pair by pair.
double classical_energy(SpinConfig config, const Lattice& lattice, double J);

/// Bytes needed to propagate a state of `sites` spins with a Krylov basis of
/// `krylov_dim` vectors (diagonal, state, basis and two work vectors).
double estimate_memory_bytes(int sites, int krylov_dim);

class FullHamiltonian {
 public:
  /// Precomputes the diagonal in one Gray-code pass. Throws BudgetError when
  /// the lattice exceeds `limits.max_sites`.
  FullHamiltonian(const Lattice& lattice, double J, double g, const EngineLimits& limits = {});

  const Lattice& lattice() const { return lattice_; }
  double J() const { return J_; }
  double g() const { return g_; }
  int sites() const { return lattice_.sites(); }
  std::size_t dimension() const { return diagonal_.size(); }
  std::span<const double> diagonal() const { return diagonal_; }
  /// Matrix element of -g S^x_k between configurations differing in spin k.
  double flip_amplitude() const { return -0.5 * g_; }

  /// out = H * in. Parallel over the configuration index.
  void apply(std::span<const double> in, std::span<double> out) const;
  void apply(std::span<const Complex> in, std::span<Complex> out) const;

  /// Gershgorin enclosure of the spectrum.
  std::pair<double, double> spectral_bounds() const;

  /// Dense matrix for small systems (oracles, dense eigensolver).
  Eigen::MatrixXd dense() const;

 private:
  Lattice lattice_;
  double J_;
  double g_;
  std::vector<double> diagonal_;
};

FullHamiltonian build_hamiltonian(const Lattice& lattice, double J, double g,
                                  const EngineLimits& limits = {});

struct StateVector {
  Eigen::VectorXcd amplitudes;
  double time = 0.0;
};

/// Fully polarised |down...down> with unit amplitude.
StateVector polarized_state(const FullHamiltonian& H);

/// One Krylov step of exp(-i H dt). Throws KrylovToleranceError (with the
/// required number of substeps) when the a-posteriori error estimate exceeds
/// `tol`. Happy breakdown is treated as exact.
StateVector propagate(const StateVector& state, const FullHamiltonian& H, double dt,
                      int krylov_dim = 30, double tol = 1e-12);

struct TimeSeries {
  int L = 0;
  double J = 1.0;
  double g = 0.0;
  double alpha = 0.0;
  double kac = 1.0;
  double dt = 0.05;
  std::vector<double> times;
  std::vector<double> sz_site_avg;
  std::vector<double> energy;
  std::vector<double> norm;
  Eigen::MatrixXd corr;             // [time x d], d = 1..L/2 along x
  Eigen::MatrixXd corr_normalized;  // corr * 8 N_alpha J^2 / g^2

  std::size_t size() const { return times.size(); }
  int max_separation() const { return static_cast<int>(corr.cols()); }
};

struct QuenchOptions {
  double t_max = 0.0;
  double dt_record = 0.05;
  int krylov_dim = 30;
  double tol = 1e-12;
  /// Start from this state instead of the polarised one (checkpoint resume).
  std::optional<StateVector> initial;
  /// Called after every recorded sample with the state at that time.
  std::function<void(const StateVector&, std::size_t)> on_record;
};

/// Global quench from |down...down>. Samples the uniform grid
/// t_n = t_0 + n * dt_record up to t_max. Throws BudgetError on memory.
TimeSeries run_quench(const Lattice& lattice, double J, double g, const QuenchOptions& options,
                      const EngineLimits& limits = {});

struct Eigenpair {
  double energy = 0.0;
  Eigen::VectorXd vector;
};

struct ExactEigenOptions {
  std::size_t dense_max_dim = 4096;
  double tol = 1e-8;
  int krylov_dim = 80;
  int max_restarts = 400;
  std::uint64_t seed = 20240917;
};

/// The k lowest eigenpairs, ascending. Dense diagonalisation up to
/// `dense_max_dim`, deflated restarted Lanczos above. Throws ConvergenceError
/// with the achieved residual.
std::vector<Eigenpair> exact_eigenpairs(const FullHamiltonian& H, int k,
                                        const ExactEigenOptions& options = {});

}  // namespace lrising
