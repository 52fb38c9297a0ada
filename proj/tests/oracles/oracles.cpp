#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace oracle {

namespace {

constexpr double kPi = 3.14159265358979323846;

using cd = std::complex<double>;

// sum_{n=0}^{N-1} exp(i theta n)
cd geometric(double theta, std::size_t N) {
  const cd z = std::exp(cd(0.0, theta));
  if (std::abs(1.0 - z) < 1e-14) {
    return cd(static_cast<double>(N), 0.0);
  }
  return (1.0 - std::pow(z, static_cast<double>(N))) / (1.0 - z);
}

std::uint64_t translate(std::uint64_t c, int L, int tx, int ty) {
  std::uint64_t out = 0;
  for (int s = 0; s < L * L; ++s) {
    if ((c >> s) & 1u) {
      const int x = (s / L + tx) % L;
      const int y = (s % L + ty) % L;
      out |= std::uint64_t{1} << (x * L + y);
    }
  }
  return out;
}

}  // namespace

int image_norm2(int i, int j, int L) {
  const int xi = i / L, yi = i % L, xj = j / L, yj = j % L;
  int best = std::numeric_limits<int>::max();
  for (int a = -1; a <= 1; ++a) {
    for (int b = -1; b <= 1; ++b) {
      const int dx = xj - xi + a * L;
      const int dy = yj - yi + b * L;
      best = std::min(best, dx * dx + dy * dy);
    }
  }
  return best;
}

double weight(int norm2, double alpha) {
  if (std::isinf(alpha)) {
    return norm2 == 1 ? 1.0 : 0.0;
  }
  return std::pow(static_cast<double>(norm2), -0.5 * alpha);
}

double kac_pair_sum(int L, double alpha) {
  const int N = L * L;
  double sum = 0.0;
  for (int i = 0; i < N; ++i) {
    for (int j = i + 1; j < N; ++j) {
      sum += weight(image_norm2(i, j, L), alpha);
    }
  }
  return sum / (N - 1);
}

double classical_energy(std::uint64_t config, int L, double alpha, double J) {
  const int N = L * L;
  const double kac = kac_pair_sum(L, alpha);
  double e = 0.0;
  for (int i = 0; i < N; ++i) {
    const double si = ((config >> i) & 1u) ? 0.5 : -0.5;
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      const double sj = ((config >> j) & 1u) ? 0.5 : -0.5;
      e += si * sj * weight(image_norm2(i, j, L), alpha);
    }
  }
  return -J / kac * e;
}

Eigen::MatrixXd dense_hamiltonian(int L, double alpha, double J, double g) {
  const int N = L * L;
  if (N > 12) {
    throw std::invalid_argument("dense_hamiltonian: too many sites");
  }
  const Eigen::Index dim = Eigen::Index{1} << N;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    H(c, c) = classical_energy(static_cast<std::uint64_t>(c), L, alpha, J);
    for (int k = 0; k < N; ++k) {
      H(c ^ (Eigen::Index{1} << k), c) += -0.5 * g;
    }
  }
  return H;
}

Eigen::VectorXcd expm_apply(const Eigen::MatrixXd& H, const Eigen::VectorXcd& v, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  const Eigen::MatrixXcd U = es.eigenvectors().cast<cd>();
  Eigen::VectorXcd c = U.adjoint() * v;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    c(i) *= std::exp(cd(0.0, -es.eigenvalues()(i) * t));
  }
  return U * c;
}

Eigen::VectorXd jacobi_eigenvalues(Eigen::MatrixXd A, double tol) {
  const Eigen::Index n = A.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (std::sqrt(off) <= tol * std::max(1.0, A.norm())) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (A(p, q) == 0.0) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Eigen::VectorXd d = A.diagonal();
  std::sort(d.data(), d.data() + d.size());
  return d;
}

std::vector<double> direct_dft(const std::vector<double>& times, const std::vector<double>& x) {
  const std::size_t N = x.size();
  const double dt = times[1] - times[0];
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(N);
  std::vector<double> out(N);
  for (std::size_t k = 0; k < N; ++k) {
    const double omega = 2.0 * kPi * static_cast<double>(k) / (static_cast<double>(N) * dt);
    cd acc = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
      const double w = 0.54 - 0.46 * std::cos(2.0 * kPi * static_cast<double>(n) /
                                              static_cast<double>(N - 1));
      acc += w * (x[n] - mean) * std::exp(cd(0.0, omega * times[n]));
    }
    out[k] = std::abs(acc);
  }
  return out;
}

double hamming_cosine_magnitude(std::size_t N, double dt, double t0, double A, double w0,
                                double phi, double omega) {
  // cos(w0 t + phi) = (e^{i(w0 t + phi)} + e^{-i(w0 t + phi)}) / 2 and
  // w_n = 0.54 - 0.23 (e^{i b n} + e^{-i b n}), b = 2 pi / (N - 1).
  const double b = 2.0 * kPi / static_cast<double>(N - 1);
  auto windowed = [&](double theta) {  // sum_n w_n e^{i theta n}
    return 0.54 * geometric(theta, N) - 0.23 * (geometric(theta + b, N) + geometric(theta - b, N));
  };
  const cd plus = std::exp(cd(0.0, w0 * t0 + phi));
  const cd minus = std::exp(cd(0.0, -w0 * t0 - phi));
  const cd mean = 0.5 * A * (plus * geometric(w0 * dt, N) + minus * geometric(-w0 * dt, N)) /
                  static_cast<double>(N);
  const cd signal =
      0.5 * A * (plus * windowed((omega + w0) * dt) + minus * windowed((omega - w0) * dt));
  const cd offset = mean * windowed(omega * dt);
  return std::abs((signal - offset) * std::exp(cd(0.0, omega * t0)));
}

double excluded_disk_integral(double alpha) {
  const double R = 60.0;
  // Composite Simpson in s = ln r; the measure r dr becomes r^2 ds.
  auto radial = [&](double cth, double a, double b) {
    if (b <= a) return 0.0;
    const int n = 4000;
    const double sa = std::log(a), h = (std::log(b) - sa) / n;
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double r = std::exp(sa + k * h);
      const double q2 = r * r - 2.0 * r * cth + 1.0;
      const double f = r * r * std::pow(r, -alpha) * std::pow(q2, -0.5 * alpha);
      acc += f * (k == 0 || k == n ? 1.0 : (k % 2 ? 4.0 : 2.0));
    }
    return acc * h / 3.0;
  };
  const int m = 20000;
  double total = 0.0;
  for (int j = 0; j < m; ++j) {
    const double th = (j + 0.5) * kPi / m;  // upper half plane, doubled below
    const double c = std::cos(th);
    const double disc = c * c - 0.75;
    if (c > 0.0 && disc > 0.0) {
      const double s = std::sqrt(disc);
      total += radial(c, 0.5, c - s) + radial(c, c + s, R);
    } else {
      total += radial(c, 0.5, R);
    }
  }
  total *= 2.0 * kPi / m;
  return total + 2.0 * kPi * std::pow(R, 2.0 - 2.0 * alpha) / (2.0 * alpha - 2.0);
}

std::vector<std::uint64_t> configurations(int L, int nu) {
  const int N = L * L;
  std::vector<std::uint64_t> out;
  if (nu < 0 || nu > N) return out;
  const std::uint64_t end = N == 64 ? 0 : (std::uint64_t{1} << N);
  if (N > 30) {
    throw std::invalid_argument("configurations: lattice too large for enumeration");
  }
  for (std::uint64_t c = 0; c < end; ++c) {
    if (std::popcount(c) == nu) out.push_back(c);
  }
  return out;
}

Eigen::MatrixXd sw_projection(const std::vector<std::uint64_t>& model, int L, double alpha,
                              double J, double g) {
  const int N = L * L;
  const int nu = std::popcount(model.front());
  std::vector<std::uint64_t> virt = configurations(L, nu - 1);
  const auto up = configurations(L, nu + 1);
  virt.insert(virt.end(), up.begin(), up.end());
  std::map<std::uint64_t, Eigen::Index> vindex;
  for (std::size_t i = 0; i < virt.size(); ++i) vindex[virt[i]] = static_cast<Eigen::Index>(i);

  const auto P = static_cast<Eigen::Index>(model.size());
  const auto Q = static_cast<Eigen::Index>(virt.size());
  Eigen::VectorXd EP(P), EQ(Q);
  for (Eigen::Index m = 0; m < P; ++m) EP(m) = classical_energy(model[m], L, alpha, J);
  for (Eigen::Index b = 0; b < Q; ++b) EQ(b) = classical_energy(virt[b], L, alpha, J);

  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(Q, P);
  for (Eigen::Index m = 0; m < P; ++m) {
    for (int k = 0; k < N; ++k) {
      V(vindex.at(model[m] ^ (std::uint64_t{1} << k)), m) = -0.5 * g;
    }
  }
  Eigen::MatrixXd X(Q, P);
  for (Eigen::Index m = 0; m < P; ++m)
    for (Eigen::Index b = 0; b < Q; ++b) X(b, m) = V(b, m) / (EP(m) - EQ(b));
  Eigen::MatrixXd H = 0.5 * (X.transpose() * V + V.transpose() * X);
  H.diagonal() += EP;
  return H;
}

std::uint64_t orbit_minimum(std::uint64_t c, int L) {
  std::uint64_t best = c;
  for (int tx = 0; tx < L; ++tx)
    for (int ty = 0; ty < L; ++ty) best = std::min(best, translate(c, L, tx, ty));
  return best;
}

Eigen::MatrixXd zero_momentum_projection(const Eigen::MatrixXd& H,
                                         const std::vector<std::uint64_t>& model, int L,
                                         std::vector<std::uint64_t>& orbits) {
  std::map<std::uint64_t, std::vector<Eigen::Index>> members;
  for (std::size_t i = 0; i < model.size(); ++i) {
    members[orbit_minimum(model[i], L)].push_back(static_cast<Eigen::Index>(i));
  }
  orbits.clear();
  std::vector<std::vector<Eigen::Index>> groups;
  for (const auto& [rep, idx] : members) {
    orbits.push_back(rep);
    groups.push_back(idx);
  }
  const auto M = static_cast<Eigen::Index>(groups.size());
  Eigen::MatrixXd out(M, M);
  for (Eigen::Index a = 0; a < M; ++a) {
    for (Eigen::Index b = 0; b < M; ++b) {
      double s = 0.0;
      for (auto i : groups[a])
        for (auto j : groups[b]) s += H(i, j);
      out(a, b) = s / std::sqrt(static_cast<double>(groups[a].size() * groups[b].size()));
    }
  }
  return out;
}

}  // namespace oracle
