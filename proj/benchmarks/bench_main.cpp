#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "lrising/exact_engine.hpp"
#include "lrising/spectral.hpp"
#include "lrising/sw_effective.hpp"

using namespace lrising;

static void BM_FullMatvec(benchmark::State& state) {
  const Lattice lat(static_cast<int>(state.range(0)), 3.0);
  const FullHamiltonian H(lat, 1.0, 0.5);
  const auto dim = static_cast<Eigen::Index>(H.dimension());
  Eigen::VectorXcd v = Eigen::VectorXcd::Random(dim), out(dim);
  for (auto _ : state) {
    H.apply({v.data(), v.size()}, {out.data(), out.size()});
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * dim);
}
BENCHMARK(BM_FullMatvec)->Arg(3)->Arg(4)->Unit(benchmark::kMicrosecond);

static void BM_KrylovStep(benchmark::State& state) {
  const Lattice lat(static_cast<int>(state.range(0)), 3.0);
  const FullHamiltonian H(lat, 1.0, 0.5);
  StateVector s = polarized_state(H);
  for (auto _ : state) {
    s = propagate(s, H, 0.05);
    benchmark::DoNotOptimize(s.amplitudes.data());
  }
}
BENCHMARK(BM_KrylovStep)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_BuildH2(benchmark::State& state) {
  const Lattice lat(static_cast<int>(state.range(0)), 3.0);
  for (auto _ : state) {
    auto H = build_h2(lat, 1.0, 0.2);
    benchmark::DoNotOptimize(H.matrix.data());
  }
}
BENCHMARK(BM_BuildH2)->Arg(21)->Arg(41)->Unit(benchmark::kMillisecond);

static void BM_BuildGenericNu2(benchmark::State& state) {
  const Lattice lat(static_cast<int>(state.range(0)), 3.0);
  const SectorBasis basis = zero_momentum_basis(lat, 2);
  for (auto _ : state) {
    auto H = build_sector_generic(basis, lat, 1.0, 0.2);
    benchmark::DoNotOptimize(H.matrix.data());
  }
}
BENCHMARK(BM_BuildGenericNu2)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

static void BM_Diagonalize(benchmark::State& state) {
  const Lattice lat(static_cast<int>(state.range(0)), 3.0);
  const auto H = build_h2(lat, 1.0, 0.2);
  const auto backend = static_cast<EigenBackend>(state.range(1));
  for (auto _ : state) {
    auto es = symmetric_eigensolve(H.matrix, backend);
    benchmark::DoNotOptimize(es.values.data());
  }
  state.SetLabel(backend == EigenBackend::eigen ? "eigen" : "automatic");
}
BENCHMARK(BM_Diagonalize)
    ->Args({21, static_cast<int>(EigenBackend::automatic)})
    ->Args({21, static_cast<int>(EigenBackend::eigen)})
    ->Args({41, static_cast<int>(EigenBackend::automatic)})
    ->Args({41, static_cast<int>(EigenBackend::eigen)})
    ->Unit(benchmark::kMillisecond);

static void BM_FftSpectrum(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  std::vector<double> t(N), x(N);
  for (std::size_t n = 0; n < N; ++n) {
    t[n] = 0.05 * static_cast<double>(n);
    x[n] = std::cos(1.89 * t[n]) + 0.3 * std::cos(3.1 * t[n]);
  }
  for (auto _ : state) {
    auto s = fft_spectrum(t, x, 0.0, t.back());
    auto p = detect_peaks(s, 0.1);
    benchmark::DoNotOptimize(p.data());
  }
}
BENCHMARK(BM_FftSpectrum)->Arg(4001)->Arg(1 << 16)->Unit(benchmark::kMicrosecond);
