#pragma once

// S^z observables of a state in the configuration basis. The x-translation by
// d lattice spacings maps site (x, y) to (x + d, y), i.e. it rotates the
// N-bit configuration word by d * L.

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace lrising {

struct ZMeasurement {
  double sz_site_avg = 0.0;
  /// (1/N) sum_i <S^z_i S^z_{i + d x>} - <S^z_i><S^z_{i + d x>} for d = 0..L-1.
  std::vector<double> connected;
  /// Per-site magnetisation <S^z_i>.
  std::vector<double> sz_site;
};

ZMeasurement measure_z(const Eigen::VectorXcd& psi, int L);

/// Rotates the low `bits` bits of `word` left by `shift` positions.
std::uint64_t rotate_bits(std::uint64_t word, int shift, int bits);

}  // namespace lrising
