#include "lrising/observables.hpp"

#include <bit>
#include <complex>
#include <cstdint>
#include <stdexcept>

namespace lrising {

std::uint64_t rotate_bits(std::uint64_t word, int shift, int bits) {
  if (bits <= 0 || bits > 63) {
    throw std::invalid_argument("rotate_bits: width out of range");
  }
  shift = ((shift % bits) + bits) % bits;
  const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
  word &= mask;
  if (shift == 0) {
    return word;
  }
  return ((word << shift) | (word >> (bits - shift))) & mask;
}

ZMeasurement measure_z(const Eigen::VectorXcd& psi, int L) {
  const int n = L * L;
  if (n > 30 || psi.size() != (Eigen::Index{1} << n)) {
    throw std::invalid_argument("measure_z: state length does not match lattice");
  }
  const auto dim = static_cast<std::int64_t>(psi.size());
  std::vector<double> up(static_cast<std::size_t>(n), 0.0);
  std::vector<double> same(static_cast<std::size_t>(L), 0.0);
  double total = 0.0;

#pragma omp parallel
  {
    std::vector<double> up_l(static_cast<std::size_t>(n), 0.0);
    std::vector<double> same_l(static_cast<std::size_t>(L), 0.0);
    double total_l = 0.0;
#pragma omp for schedule(static) nowait
    for (std::int64_t c = 0; c < dim; ++c) {
      const double p = std::norm(psi[c]);
      if (p == 0.0) {
        continue;
      }
      total_l += p;
      auto word = static_cast<std::uint64_t>(c);
      while (word != 0) {
        up_l[static_cast<std::size_t>(std::countr_zero(word))] += p;
        word &= word - 1;
      }
      for (int d = 0; d < L; ++d) {
        const auto rot = rotate_bits(static_cast<std::uint64_t>(c), d * L, n);
        const int differ = std::popcount(static_cast<std::uint64_t>(c) ^ rot);
        // sum_i s_i s_{i+d} / 4 with s = +-1, divided by N below.
        same_l[static_cast<std::size_t>(d)] += p * 0.25 * (n - 2 * differ);
      }
    }
#pragma omp critical
    {
      total += total_l;
      for (int i = 0; i < n; ++i) up[i] += up_l[i];
      for (int d = 0; d < L; ++d) same[d] += same_l[d];
    }
  }

  ZMeasurement out;
  out.sz_site.resize(static_cast<std::size_t>(n));
  double avg = 0.0;
  for (int i = 0; i < n; ++i) {
    out.sz_site[i] = up[i] - 0.5 * total;
    avg += out.sz_site[i];
  }
  out.sz_site_avg = avg / n;
  out.connected.resize(static_cast<std::size_t>(L));
  for (int d = 0; d < L; ++d) {
    double mm = 0.0;
    for (int i = 0; i < n; ++i) {
      const int j = (i + d * L) % n;
      mm += out.sz_site[i] * out.sz_site[j];
    }
    out.connected[d] = (same[d] - mm) / n;
  }
  return out;
}

}  // namespace lrising
