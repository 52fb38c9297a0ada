#include "lrising/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace lrising {

LanczosExponential::LanczosExponential(const HermitianOperator& op, const Eigen::VectorXcd& v,
                                       int krylov_dim) {
  if (krylov_dim < 1) {
    throw std::invalid_argument("krylov dimension must be positive");
  }
  norm_ = v.norm();
  if (norm_ == 0.0) {
    invariant_ = true;
    alpha_.push_back(0.0);
    basis_.push_back(v);
    ritz_values_ = Eigen::VectorXd::Zero(1);
    ritz_vectors_ = Eigen::MatrixXd::Identity(1, 1);
    return;
  }
  const auto m = static_cast<std::size_t>(std::min<Eigen::Index>(krylov_dim, v.size()));
  basis_.reserve(m);
  basis_.push_back(v / norm_);
  Eigen::VectorXcd w(v.size());
  double scale = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    op(basis_[j], w);
    const double a = basis_[j].dot(w).real();
    alpha_.push_back(a);
    // Full reorthogonalisation (two passes of classical Gram-Schmidt).
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis_) {
        w -= q * q.dot(w);
      }
    }
    const double b = w.norm();
    scale = std::max({scale, std::abs(a), b});
    if (b <= 1e-13 * std::max(scale, 1.0)) {
      invariant_ = true;
      residual_beta_ = 0.0;
      break;
    }
    if (j + 1 == m) {
      residual_beta_ = b;
      invariant_ = (m == static_cast<std::size_t>(v.size()));
      if (invariant_) {
        residual_beta_ = 0.0;
      }
      break;
    }
    beta_.push_back(b);
    basis_.push_back(w / b);
  }
  const int k = dimension();
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    T(i, i) = alpha_[i];
    if (i + 1 < k) {
      T(i, i + 1) = beta_[i];
      T(i + 1, i) = beta_[i];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  ritz_values_ = es.eigenvalues();
  ritz_vectors_ = es.eigenvectors();
}

Eigen::VectorXcd LanczosExponential::small_exponential(double t) const {
  const int k = dimension();
  Eigen::VectorXcd c(k);
  for (int i = 0; i < k; ++i) {
    c(i) = std::polar(ritz_vectors_(0, i), -ritz_values_(i) * t);
  }
  return ritz_vectors_.cast<std::complex<double>>() * c;
}

double LanczosExponential::error_estimate(double t) const {
  if (invariant_) {
    return 0.0;
  }
  const Eigen::VectorXcd y = small_exponential(t);
  return norm_ * residual_beta_ * std::abs(y(dimension() - 1));
}

double LanczosExponential::admissible_step(double tol, double t_hi) const {
  if (invariant_) {
    return t_hi;
  }
  // The estimate is only trustworthy while rho * t stays well inside the
  // Krylov dimension, and it can dip accidentally at large t, so scan
  // upwards from zero instead of testing the far end.
  const double rho = 0.5 * (ritz_values_.maxCoeff() - ritz_values_.minCoeff());
  double cap = t_hi;
  if (rho > 0.0) {
    cap = std::min(cap, 0.5 * dimension() / rho);
  }
  constexpr int kSamples = 64;
  double lo = 0.0;
  double hi = cap;
  bool exceeded = false;
  for (int k = 1; k <= kSamples; ++k) {
    const double t = cap * k / kSamples;
    if (error_estimate(t) > tol) {
      hi = t;
      exceeded = true;
      break;
    }
    lo = t;
  }
  if (!exceeded) {
    return cap;
  }
  for (int it = 0; it < 50; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (error_estimate(mid) <= tol) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

Eigen::VectorXcd LanczosExponential::evaluate(double t) const {
  const Eigen::VectorXcd y = small_exponential(t);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(basis_.front().size());
  for (int i = 0; i < dimension(); ++i) {
    out += y(i) * basis_[i];
  }
  return norm_ * out;
}

}  // namespace lrising
