#include "doctest.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "lrising/errors.hpp"
#include "lrising/exact_engine.hpp"
#include "lrising/observables.hpp"
#include "oracles/oracles.hpp"

using namespace lrising;

namespace {

Eigen::VectorXcd random_state(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(n(rng), n(rng));
  return v / v.norm();
}

Eigen::VectorXcd apply(const FullHamiltonian& H, const Eigen::VectorXcd& v) {
  Eigen::VectorXcd out(v.size());
  H.apply(std::span<const Complex>(v.data(), static_cast<std::size_t>(v.size())),
          std::span<Complex>(out.data(), static_cast<std::size_t>(out.size())));
  return out;
}

// <S^z_i S^z_j> - <S^z_i><S^z_j> averaged over i with j = i + d along x.
double direct_connected(const Eigen::VectorXcd& psi, int L, int d) {
  const int N = L * L;
  std::vector<double> m(N, 0.0);
  for (Eigen::Index c = 0; c < psi.size(); ++c) {
    const double p = std::norm(psi(c));
    for (int s = 0; s < N; ++s) m[s] += p * (((c >> s) & 1) ? 0.5 : -0.5);
  }
  double acc = 0.0;
  for (int x = 0; x < L; ++x) {
    for (int y = 0; y < L; ++y) {
      const int i = x * L + y;
      const int j = ((x + d) % L) * L + y;
      double zz = 0.0;
      for (Eigen::Index c = 0; c < psi.size(); ++c) {
        const double si = ((c >> i) & 1) ? 0.5 : -0.5;
        const double sj = ((c >> j) & 1) ? 0.5 : -0.5;
        zz += std::norm(psi(c)) * si * sj;
      }
      acc += zz - m[i] * m[j];
    }
  }
  return acc / N;
}

}  // namespace

TEST_CASE("classical_energy closed forms") {
  for (int L : {2, 3, 4, 5}) {
    for (double alpha : {2.0, 3.0, 6.0}) {
      const Lattice lat(L, alpha);
      const double N = lat.sites();
      const double J = 1.3;
      const double E0 = -J * (N - 1) / 2;
      CHECK(classical_energy(0, lat, J) == doctest::Approx(E0).epsilon(1e-13));
      CHECK(classical_energy(1, lat, J) == doctest::Approx(E0 + 2 * J * (1 - 1 / N)).epsilon(1e-13));
      for (int s = 1; s < lat.sites(); ++s) {
        const Displacement d = lat.displacement(0, s);
        const double expected =
            E0 + 4 * J * (1 - 1 / N) - 2 * J / lat.kac() * lat.coupling(d);
        CHECK(classical_energy((SpinConfig{1} << s) | 1, lat, J) ==
              doctest::Approx(expected).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("classical_energy agrees with the pair-sum oracle on random configurations") {
  std::mt19937_64 rng(7);
  for (int L : {3, 4, 5}) {
    for (double alpha : {1.5, 3.0, kNearestNeighbourLimit}) {
      const Lattice lat(L, alpha);
      std::uniform_int_distribution<std::uint64_t> pick(0, (std::uint64_t{1} << lat.sites()) - 1);
      for (int rep = 0; rep < 20; ++rep) {
        const auto c = pick(rng);
        CHECK(classical_energy(c, lat, 0.7) ==
              doctest::Approx(oracle::classical_energy(c, L, alpha, 0.7)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("Gray-code diagonal equals direct energies") {
  for (int L : {2, 3, 4}) {
    const Lattice lat(L, 2.5);
    const FullHamiltonian H(lat, 1.0, 0.3);
    const auto diag = H.diagonal();
    CHECK(diag[0] == doctest::Approx(-(lat.sites() - 1) / 2.0));
    for (std::size_t c = 0; c < diag.size(); c += (L == 4 ? 97 : 1)) {
      CHECK(diag[c] == doctest::Approx(classical_energy(c, lat, 1.0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("dense Hamiltonian matches the independent construction") {
  for (int L : {2, 3}) {
    for (double alpha : {2.0, 3.0, kNearestNeighbourLimit}) {
      const Lattice lat(L, alpha);
      const FullHamiltonian H(lat, 1.0, 0.5);
      const Eigen::MatrixXd ref = oracle::dense_hamiltonian(L, alpha, 1.0, 0.5);
      CHECK((H.dense() - ref).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("matvec on L = 3 agrees with the materialised matrix") {
  const Lattice lat(3, 3.0);
  const FullHamiltonian H(lat, 1.0, 0.5);
  const Eigen::MatrixXd ref = oracle::dense_hamiltonian(3, 3.0, 1.0, 0.5);
  const Eigen::VectorXcd v = random_state(H.dimension(), 11);
  const Eigen::VectorXcd expected = ref.cast<Complex>() * v;
  CHECK((apply(H, v) - expected).norm() <= 1e-12);
}

TEST_CASE("g = 0 matvec is a diagonal multiply") {
  const Lattice lat(2, 2.0);
  const FullHamiltonian H(lat, 1.0, 0.0);
  const Eigen::VectorXcd v = random_state(H.dimension(), 3);
  const Eigen::VectorXcd out = apply(H, v);
  for (Eigen::Index c = 0; c < v.size(); ++c) {
    CHECK(std::abs(out(c) - H.diagonal()[static_cast<std::size_t>(c)] * v(c)) <= 1e-15);
  }
}

TEST_CASE("J = 0 spectrum is that of independent spins") {
  const Lattice lat(2, 2.0);
  const double g = 0.8;
  const FullHamiltonian H(lat, 0.0, g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.dense());
  // Tensor product of four two-level systems with levels -+g/2.
  std::vector<double> expected;
  for (int mask = 0; mask < 16; ++mask) {
    const int up = std::popcount(static_cast<unsigned>(mask));
    expected.push_back(-g * (0.5 * (4 - up) - 0.5 * up));
  }
  std::sort(expected.begin(), expected.end());
  for (int i = 0; i < 16; ++i) CHECK(es.eigenvalues()(i) == doctest::Approx(expected[i]));
  CHECK(es.eigenvalues()(0) == doctest::Approx(-g * 4 / 2.0));
  CHECK(es.eigenvalues()(15) == doctest::Approx(g * 4 / 2.0));
}

TEST_CASE("too many sites is a budget refusal") {
  CHECK_THROWS_AS(FullHamiltonian(Lattice(6, 3.0), 1.0, 0.2), BudgetError);
  EngineLimits tight;
  tight.max_sites = 9;
  CHECK_THROWS_AS(FullHamiltonian(Lattice(4, 3.0), 1.0, 0.2, tight), BudgetError);
}

TEST_CASE("propagate matches the dense exponential on L = 3") {
  const Lattice lat(3, 3.0);
  const FullHamiltonian H(lat, 1.0, 0.5);
  const Eigen::MatrixXd dense = oracle::dense_hamiltonian(3, 3.0, 1.0, 0.5);
  StateVector s = polarized_state(H);
  const StateVector out = propagate(s, H, 0.1);
  const Eigen::VectorXcd ref = oracle::expm_apply(dense, s.amplitudes, 0.1);
  CHECK((out.amplitudes - ref).norm() <= 1e-8);
  CHECK(out.time == doctest::Approx(0.1));

  const Eigen::VectorXcd v = random_state(H.dimension(), 5);
  const StateVector r = propagate({v, 0.0}, H, 0.7);
  CHECK((r.amplitudes - oracle::expm_apply(dense, v, 0.7)).norm() <= 1e-8);
}

TEST_CASE("propagate keeps an eigenstate up to its phase") {
  const Lattice lat(3, 2.0);
  const FullHamiltonian H(lat, 1.0, 0.4);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.dense());
  const Eigen::VectorXcd v = es.eigenvectors().col(3).cast<Complex>();
  const double E = es.eigenvalues()(3);
  const StateVector out = propagate({v, 0.0}, H, 0.5);
  const Complex overlap = v.dot(out.amplitudes);
  CHECK(std::norm(overlap) >= 1 - 1e-10);
  CHECK(std::abs(overlap - std::exp(Complex(0, -E * 0.5))) <= 1e-9);
}

TEST_CASE("propagate with g = 0 only rotates the phase of the polarised state") {
  const Lattice lat(3, 3.0);
  const FullHamiltonian H(lat, 1.0, 0.0);
  const StateVector out = propagate(polarized_state(H), H, 2.0);
  const double E0 = -(lat.sites() - 1) / 2.0;
  CHECK(std::abs(out.amplitudes(0) - std::exp(Complex(0, -E0 * 2.0))) <= 1e-12);
  CHECK(out.amplitudes.tail(out.amplitudes.size() - 1).norm() <= 1e-14);
}

TEST_CASE("propagate refuses an unreachable tolerance and names the subdivision") {
  const Lattice lat(3, 3.0);
  const FullHamiltonian H(lat, 1.0, 0.5);
  const Eigen::VectorXcd v = random_state(H.dimension(), 9);
  try {
    propagate({v, 0.0}, H, 20.0, 4, 1e-12);
    FAIL("expected KrylovToleranceError");
  } catch (const KrylovToleranceError& e) {
    CHECK(e.substeps() > 1);
  }
  CHECK_THROWS_AS(propagate({v, 0.0}, H, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(propagate({2.0 * v, 0.0}, H, 0.1), std::invalid_argument);
}

TEST_CASE("run_quench edge cases") {
  const Lattice lat(3, 3.0);
  QuenchOptions opt;
  opt.t_max = 0.0;
  const TimeSeries one = run_quench(lat, 1.0, 0.2, opt);
  REQUIRE(one.size() == 1);
  CHECK(one.sz_site_avg[0] == doctest::Approx(-0.5));
  CHECK(one.corr.row(0).cwiseAbs().maxCoeff() == 0.0);

  opt.t_max = 10.0;
  const TimeSeries frozen = run_quench(lat, 1.0, 0.0, opt);
  CHECK(frozen.size() == 201);
  for (std::size_t n = 0; n < frozen.size(); ++n) {
    CHECK(frozen.sz_site_avg[n] == doctest::Approx(-0.5).epsilon(1e-13));
    CHECK(frozen.corr.row(static_cast<Eigen::Index>(n)).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("run_quench reproduces exact dynamics on L = 3") {
  const Lattice lat(3, 3.0);
  const double g = 0.5;
  QuenchOptions opt;
  opt.t_max = 40.0;
  const TimeSeries ts = run_quench(lat, 1.0, g, opt);
  const Eigen::MatrixXd dense = oracle::dense_hamiltonian(3, 3.0, 1.0, g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(512);
  psi0(0) = 1.0;
  const Eigen::VectorXcd c0 = es.eigenvectors().transpose().cast<Complex>() * psi0;
  for (std::size_t n : {0u, 1u, 77u, 400u, 799u}) {
    const double t = ts.times[n];
    CHECK(t == doctest::Approx(0.05 * static_cast<double>(n)));
    Eigen::VectorXcd c = c0;
    for (Eigen::Index i = 0; i < 512; ++i) c(i) *= std::exp(Complex(0, -es.eigenvalues()(i) * t));
    const Eigen::VectorXcd psi = es.eigenvectors().cast<Complex>() * c;
    double sz = 0.0;
    for (Eigen::Index k = 0; k < 512; ++k) {
      sz += std::norm(psi(k)) * (std::popcount(static_cast<unsigned>(k)) - 4.5) / 9.0;
    }
    CHECK(ts.sz_site_avg[n] == doctest::Approx(sz).epsilon(1e-9));
    CHECK(ts.corr(static_cast<Eigen::Index>(n), 0) ==
          doctest::Approx(direct_connected(psi, 3, 1)).epsilon(1e-9));
    const double normalised = ts.corr(static_cast<Eigen::Index>(n), 0) * 8 * lat.kac() / (g * g);
    CHECK(ts.corr_normalized(static_cast<Eigen::Index>(n), 0) == doctest::Approx(normalised));
  }
  const double E0 = ts.energy[0];
  CHECK(E0 == doctest::Approx(-4.0));
  for (std::size_t n = 0; n < ts.size(); ++n) {
    CHECK(std::abs(ts.norm[n] - 1.0) <= 1e-9);
    CHECK(std::abs(ts.energy[n] - E0) <= 1e-7 * std::abs(E0));
  }
}

TEST_CASE("measure_z matches direct expectation values and C(d) = C(L - d)") {
  for (int L : {2, 3, 4}) {
    const auto dim = std::size_t{1} << (L * L);
    const Eigen::VectorXcd psi = random_state(dim, 40 + static_cast<std::uint64_t>(L));
    const ZMeasurement m = measure_z(psi, L);
    REQUIRE(m.connected.size() == static_cast<std::size_t>(L));
    for (int d = 0; d < L; ++d) {
      CHECK(m.connected[d] == doctest::Approx(direct_connected(psi, L, d)).epsilon(1e-12));
    }
    for (int d = 1; d < L; ++d) CHECK(m.connected[d] == m.connected[L - d]);
  }
}

TEST_CASE("exact_eigenpairs") {
  SUBCASE("g = 0 gives the classical energies") {
    const Lattice lat(3, 3.0);
    const FullHamiltonian H(lat, 1.0, 0.0);
    std::vector<double> classical(H.diagonal().begin(), H.diagonal().end());
    std::sort(classical.begin(), classical.end());
    const auto pairs = exact_eigenpairs(H, 20);
    for (int i = 0; i < 20; ++i) CHECK(pairs[i].energy == doctest::Approx(classical[i]));
  }
  SUBCASE("L = 2 matches the dense oracle") {
    const Lattice lat(2, 2.0);
    const FullHamiltonian H(lat, 1.0, 0.3);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(oracle::dense_hamiltonian(2, 2.0, 1.0, 0.3));
    const auto pairs = exact_eigenpairs(H, 16);
    for (int i = 0; i < 16; ++i) CHECK(pairs[i].energy == doctest::Approx(es.eigenvalues()(i)));
  }
  SUBCASE("iterative path agrees with the dense oracle and meets the residual") {
    const Lattice lat(3, 3.0);
    const FullHamiltonian H(lat, 1.0, 0.4);
    ExactEigenOptions opt;
    opt.dense_max_dim = 16;
    const auto pairs = exact_eigenpairs(H, 4, opt);
    const Eigen::VectorXd ref = oracle::jacobi_eigenvalues(oracle::dense_hamiltonian(3, 3.0, 1.0, 0.4));
    const Eigen::MatrixXd D = H.dense();
    for (int i = 0; i < 4; ++i) {
      CHECK(pairs[i].energy == doctest::Approx(ref(i)).epsilon(1e-9));
      CHECK((D * pairs[i].vector - pairs[i].energy * pairs[i].vector).norm() <= 1e-8);
    }
    CHECK(pairs[0].energy <= -(lat.sites() - 1) / 2.0);
  }
}
