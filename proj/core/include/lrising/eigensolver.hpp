#pragma once

#include <Eigen/Core>

namespace lrising {

/// All eigenpairs of a real symmetric matrix, ascending. Column i of
/// `vectors` belongs to `values[i]`.
struct EigenSolution {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;

  Eigen::Index size() const { return values.size(); }
};

enum class EigenBackend {
  automatic,  // LAPACK when it passes its checks, otherwise Eigen
  lapack,     // LAPACK dsyevd, result unchecked
  eigen,      // Eigen::SelfAdjointEigenSolver (no BLAS involved)
};

/// A matrix whose off-diagonal part is exactly zero returns its sorted
/// diagonal with coordinate unit vectors, so degenerate levels are never
/// mixed. In automatic mode a LAPACK result is accepted only if the library
/// passed a one-time self-test and the result passes a randomised residual
/// check ||A V x - V diag(values) x|| for two probe vectors x; some BLAS
/// builds return wrong products on recent CPUs. Throws ConvergenceError on
/// solver failure and std::invalid_argument for non-square or non-finite
/// input.
EigenSolution symmetric_eigensolve(const Eigen::MatrixXd& A,
                                   EigenBackend backend = EigenBackend::automatic);

/// Cached result of the LAPACK self-test (a 256 x 256 problem with known
/// spectrum and degenerate levels).
bool lapack_backend_healthy();

/// Backend used by the most recent automatic solve on this thread.
EigenBackend last_backend_used();

/// Largest |A_ij - A_ji|.
double asymmetry(const Eigen::MatrixXd& A);

}  // namespace lrising
