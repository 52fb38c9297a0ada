#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace lrising {

/// y = A x for a Hermitian operator A.
using HermitianOperator = std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>;

/// Lanczos approximation of exp(-i A t) v on the Krylov space K_m(A, v).
/// One basis serves every t up to the admissible step size.
class LanczosExponential {
 public:
  LanczosExponential(const HermitianOperator& op, const Eigen::VectorXcd& v, int krylov_dim);

  int dimension() const { return static_cast<int>(alpha_.size()); }
  /// True when the Krylov space closed before `krylov_dim` steps.
  bool invariant() const { return invariant_; }

  /// Saad's a-posteriori estimate beta_m |e_m^T exp(-i T t) e_1| * |v|.
  double error_estimate(double t) const;
  /// Step in (0, t_hi] with rho * t <= m / 2 (rho the Ritz half-width) whose
  /// estimate stays below tol on a uniform scan from zero, refined by bisection.
  double admissible_step(double tol, double t_hi) const;

  Eigen::VectorXcd evaluate(double t) const;

 private:
  Eigen::VectorXcd small_exponential(double t) const;

  std::vector<Eigen::VectorXcd> basis_;
  std::vector<double> alpha_;
  std::vector<double> beta_;  // beta_[j] couples basis j and j+1
  double residual_beta_ = 0.0;
  double norm_ = 0.0;
  bool invariant_ = false;
  Eigen::VectorXd ritz_values_;
  Eigen::MatrixXd ritz_vectors_;
};

}  // namespace lrising
