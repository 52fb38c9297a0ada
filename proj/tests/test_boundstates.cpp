#include "doctest.h"

#include <cmath>
#include <random>

#include "lrising/boundstates.hpp"
#include "lrising/sw_effective.hpp"
#include "oracles/oracles.hpp"

using namespace lrising;

namespace {

Eigen::VectorXd random_unit(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = g(rng);
  return v.normalized();
}

Eigen::Index index_of(const SectorBasis& b, Displacement d) {
  for (std::size_t i = 0; i < b.displacements.size(); ++i) {
    if (b.displacements[i] == d) return static_cast<Eigen::Index>(i);
  }
  FAIL("displacement not in basis");
  return -1;
}

}  // namespace

TEST_CASE("ipr examples") {
  CHECK(ipr(Eigen::VectorXd::Unit(7, 3)) == 1.0);
  for (int M : {2, 10, 1000}) {
    CHECK(ipr(Eigen::VectorXd::Constant(M, 1.0 / std::sqrt(M))) == doctest::Approx(1.0 / M));
  }
  Eigen::VectorXd v(2);
  v << 0.6, -0.8;
  CHECK(ipr(v) == doctest::Approx(0.6 * 0.6 * 0.6 * 0.6 + 0.8 * 0.8 * 0.8 * 0.8));
  CHECK_THROWS_AS(ipr(Eigen::VectorXd::Constant(3, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(ipr(Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST_CASE("mean_separation") {
  const SectorBasis b = displacement_basis(5, true);
  CHECK(mean_separation(Eigen::VectorXd::Unit(static_cast<Eigen::Index>(b.size()),
                                              index_of(b, {1, 0})),
                        b) == doctest::Approx(1.0));
  CHECK(mean_separation(Eigen::VectorXd::Unit(static_cast<Eigen::Index>(b.size()),
                                              index_of(b, {2, 2})),
                        b) == doctest::Approx(std::sqrt(8.0)));
  CHECK_THROWS_AS(mean_separation(Eigen::VectorXd::Zero(3), b), std::invalid_argument);
  CHECK_THROWS_AS(mean_separation(Eigen::VectorXd::Unit(25, 0), site_basis(5)),
                  std::invalid_argument);

  // Uniform state on every relative coordinate of a large lattice: the mean
  // of the minimum-image distance over all other sites.
  const int L = 101;
  const SectorBasis all = displacement_basis(L, false);
  const auto M = static_cast<Eigen::Index>(all.size());
  double ref = 0.0;
  for (int j = 1; j < L * L; ++j) ref += std::sqrt(oracle::image_norm2(0, j, L));
  ref /= (L * L - 1);
  CHECK(mean_separation(Eigen::VectorXd::Constant(M, 1.0 / std::sqrt(M)), all) ==
        doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("classify") {
  SUBCASE("g = 0 eigenstates are single displacement classes, all bound") {
    const Lattice lat(7, 3.0);
    const auto H = build_h2(lat, 1.0, 0.0);
    const EigenSolution es = diagonalize(H);
    const auto records = classify(es, H.basis);
    REQUIRE(records.size() == H.basis.size());
    for (const auto& r : records) {
      CHECK(r.label == StateLabel::bound);
      CHECK(r.ipr == 1.0);
    }
    CHECK(records[0].dbar == doctest::Approx(1.0));
  }
  SUBCASE("thresholds split the three labels") {
    const SectorBasis b = displacement_basis(31, true);
    const auto M = static_cast<Eigen::Index>(b.size());
    EigenSolution es;
    es.values = Eigen::Vector3d(0.0, 1.0, 2.0);
    es.vectors = Eigen::MatrixXd::Zero(M, 3);
    es.vectors.col(0) = Eigen::VectorXd::Unit(M, 0);
    es.vectors.col(1).head(8).setConstant(1.0 / std::sqrt(8.0));
    es.vectors.col(2).setConstant(1.0 / std::sqrt(static_cast<double>(M)));
    const auto r = classify(es, b);
    CHECK(r[0].label == StateLabel::bound);
    CHECK(r[1].label == StateLabel::bound);
    CHECK(r[2].label == StateLabel::scattering);
    es.vectors.col(1).setZero();
    es.vectors.col(1).head(20).setConstant(1.0 / std::sqrt(20.0));
    CHECK(classify(es, b)[1].label == StateLabel::quasilocalized);
    CHECK(to_string(StateLabel::quasilocalized) == "quasilocalized");
  }
}

TEST_CASE("density_map") {
  for (int L : {4, 5, 6, 9}) {
    CAPTURE(L);
    for (bool identify : {false, true}) {
      const SectorBasis b = displacement_basis(L, identify);
      const auto M = static_cast<Eigen::Index>(b.size());
      const Eigen::VectorXd psi = random_unit(M, static_cast<std::uint64_t>(L));
      const DensityMap map = density_map(psi, b, L);
      CHECK(map.sum() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(map.at({0, 0}) == 0.0);
      if (identify) {
        for (const auto& d : b.displacements) {
          const Displacement inv{canonical_component(-d.dx, L), canonical_component(-d.dy, L)};
          CHECK(map.at(d) == doctest::Approx(map.at(inv)));
        }
      }
      const Displacement target = b.displacements[static_cast<std::size_t>(M / 2)];
      const DensityMap delta = density_map(Eigen::VectorXd::Unit(M, M / 2), b, L);
      CHECK(delta.sum() == doctest::Approx(1.0));
      if (!identify || b.orbit_sizes[static_cast<std::size_t>(M / 2)] == 1) {
        CHECK(delta.at(target) == 1.0);
        CHECK(delta.argmax() == target);
      } else {
        CHECK(delta.at(target) == 0.5);
      }
    }
  }
  CHECK_THROWS_AS(density_map(Eigen::VectorXd::Zero(3), displacement_basis(5, true), 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(density_map(Eigen::VectorXd::Zero(12), displacement_basis(5, true), 7),
                  std::invalid_argument);
}
