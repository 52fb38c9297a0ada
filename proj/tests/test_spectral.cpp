#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "lrising/spectral.hpp"
#include "oracles/oracles.hpp"

using namespace lrising;

namespace {

std::vector<double> grid(std::size_t N, double dt, double t0 = 0.0) {
  std::vector<double> t(N);
  for (std::size_t n = 0; n < N; ++n) t[n] = t0 + dt * static_cast<double>(n);
  return t;
}

struct Tone {
  double A;
  double w;
  double phi;
};

std::vector<double> signal(const std::vector<double>& t, const std::vector<Tone>& tones,
                           double offset = 0.0) {
  std::vector<double> x(t.size(), offset);
  for (std::size_t n = 0; n < t.size(); ++n)
    for (const auto& s : tones) x[n] += s.A * std::cos(s.w * t[n] + s.phi);
  return x;
}

GapTable table(std::initializer_list<double> deltas) {
  GapTable g;
  int i = 1;
  for (double d : deltas) g.entries.push_back({0, 1, 1, i++, d, "test"});
  return g;
}

}  // namespace

TEST_CASE("hamming_window") {
  const auto w = hamming_window(5);
  CHECK(w[0] == doctest::Approx(0.08));
  CHECK(w[2] == doctest::Approx(1.0));
  CHECK(w[1] == doctest::Approx(0.54));
  const auto big = hamming_window(1001);
  for (std::size_t n = 0; n < big.size(); ++n) CHECK(big[n] == big[big.size() - 1 - n]);
  CHECK(hamming_window(2)[0] == doctest::Approx(0.08));
  CHECK_THROWS_AS(hamming_window(1), std::invalid_argument);
}

TEST_CASE("fft_spectrum of trivial signals") {
  const auto t = grid(400, 0.05);
  const Spectrum c = fft_spectrum(t, std::vector<double>(400, 3.7), 0.0, 100.0);
  CHECK(c.size() == 400);
  // Round-off relative to sum_n w_n |x_n| only.
  CHECK(*std::max_element(c.magnitudes.begin(), c.magnitudes.end()) <= 1e-14 * 3.7 * 400);
  CHECK(detect_peaks(c).empty());
  const Spectrum z = fft_spectrum(t, std::vector<double>(400, 0.0), 0.0, 100.0);
  CHECK(*std::max_element(z.magnitudes.begin(), z.magnitudes.end()) == 0.0);
  CHECK(c.bin_width() == doctest::Approx(2 * std::numbers::pi / (400 * 0.05)));
  CHECK(c.omegas[1] == doctest::Approx(c.bin_width()));
}

TEST_CASE("fft_spectrum of a cosine matches the closed form") {
  const double dt = 0.05;
  const auto t = grid(1000, dt, 2.0);
  for (const Tone& tone : {Tone{1.0, 1.3, 0.4}, Tone{0.2, 5.0, -1.0}, Tone{2.0, 0.77, 0.0}}) {
    const auto x = signal(t, {tone});
    const Spectrum s = fft_spectrum(t, x, 2.0, 100.0);
    REQUIRE(s.size() == 1000);
    const double scale = *std::max_element(s.magnitudes.begin(), s.magnitudes.end());
    for (std::size_t k = 0; k < s.size(); k += 7) {
      const double ref =
          oracle::hamming_cosine_magnitude(1000, dt, 2.0, tone.A, tone.w, tone.phi, s.omegas[k]);
      CHECK(std::abs(s.magnitudes[k] - ref) <= 1e-9 * scale);
    }
  }
}

TEST_CASE("fft_spectrum agrees with the direct transform") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  for (std::size_t N : {64u, 101u, 257u}) {
    const auto t = grid(N, 0.1, 1.0);
    std::vector<double> x(N);
    for (auto& v : x) v = n(rng);
    const Spectrum s = fft_spectrum(t, x, 0.0, 1e9);
    const auto ref = oracle::direct_dft(t, x);
    for (std::size_t k = 0; k < N; ++k) CHECK(std::abs(s.magnitudes[k] - ref[k]) <= 1e-10);
  }
}

TEST_CASE("fft_spectrum windows and validates its input") {
  const auto t = grid(200, 0.05);
  const auto x = signal(t, {{1.0, 2.0, 0.0}});
  const Spectrum s = fft_spectrum(t, x, 1.0, 6.0);
  CHECK(s.size() == 101);
  CHECK(s.t_min == doctest::Approx(1.0));
  CHECK(s.t_max == doctest::Approx(6.0));
  CHECK_THROWS_AS(fft_spectrum(t, x, 20.0, 30.0), std::invalid_argument);
  auto bent = t;
  bent[50] += 0.01;
  CHECK_THROWS_AS(fft_spectrum(bent, x, 0.0, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(fft_spectrum(t, std::vector<double>(3, 0.0), 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("fft_spectrum is linear") {
  const auto t = grid(300, 0.05);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> a(300), b(300), sum(300);
  for (std::size_t i = 0; i < 300; ++i) {
    a[i] = n(rng);
    b[i] = 2.5 * a[i];
    sum[i] = a[i] + b[i];
  }
  const Spectrum sa = fft_spectrum(t, a, 0.0, 100.0);
  const Spectrum ssum = fft_spectrum(t, sum, 0.0, 100.0);
  for (std::size_t k = 0; k < 300; ++k) {
    CHECK(ssum.magnitudes[k] == doctest::Approx(3.5 * sa.magnitudes[k]).epsilon(1e-12));
  }
}

TEST_CASE("detect_peaks") {
  const double dt = 0.05;
  const auto t = grid(4000, dt);
  SUBCASE("one on-grid cosine") {
    const Spectrum s0 = fft_spectrum(t, std::vector<double>(4000, 0.0), 0.0, 1e9);
    const double w = 40 * s0.bin_width();
    const Spectrum s = fft_spectrum(t, signal(t, {{1.0, w, 0.3}}), 0.0, 1e9);
    const auto peaks = detect_peaks(s, 0.1);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].bin == 40);
    CHECK(std::abs(peaks[0].omega - w) <= 0.05 * s.bin_width());
  }
  SUBCASE("two cosines keep their amplitude ratio") {
    const Spectrum s = fft_spectrum(t, signal(t, {{1.0, 1.0, 0.0}, {0.5, 2.3, 1.0}}), 0.0, 1e9);
    const auto peaks = detect_peaks(s, 0.1);
    REQUIRE(peaks.size() == 2);
    CHECK(peaks[0].magnitude >= peaks[1].magnitude);
    CHECK(std::abs(peaks[0].omega - 1.0) <= 0.2 * s.bin_width());
    CHECK(std::abs(peaks[1].omega - 2.3) <= 0.2 * s.bin_width());
    CHECK(peaks[1].magnitude / peaks[0].magnitude == doctest::Approx(0.5).epsilon(0.1));
  }
  SUBCASE("off-grid frequencies are refined to within a fifth of a bin") {
    for (double frac : {0.1, 0.25, 0.4, 0.5, 0.7}) {
      const double w = (57.0 + frac) * 2 * std::numbers::pi / (4000 * dt);
      const Spectrum s = fft_spectrum(t, signal(t, {{1.0, w, 0.0}}), 0.0, 1e9);
      const auto peaks = detect_peaks(s, 0.1);
      REQUIRE(!peaks.empty());
      CHECK(std::abs(peaks[0].omega - w) <= 0.2 * s.bin_width());
    }
  }
  SUBCASE("threshold") {
    const Spectrum s = fft_spectrum(t, signal(t, {{1.0, 1.0, 0.0}, {0.05, 2.0, 0.0}}), 0.0, 1e9);
    CHECK(detect_peaks(s, 0.1).size() == 1);
    CHECK(detect_peaks(s, 0.02).size() >= 2);
    CHECK_THROWS_AS(detect_peaks(s, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(detect_peaks(s, 1.0), std::invalid_argument);
  }
}

TEST_CASE("match_gaps") {
  const std::vector<Peak> peaks{{1.0, 5.0, 10}, {2.02, 3.0, 20}, {7.0, 1.0, 70}};
  const auto m = match_gaps(peaks, table({0.5, 1.0, 2.0}), 0.05);
  REQUIRE(m.size() == 3);
  REQUIRE(m[0].gap.has_value());
  CHECK(m[0].gap->delta == 1.0);
  CHECK(m[0].residual == 0.0);
  REQUIRE(m[1].gap.has_value());
  CHECK(m[1].gap->delta == 2.0);
  CHECK(m[1].residual == doctest::Approx(0.02));
  CHECK_FALSE(m[2].gap.has_value());
  CHECK(m[2].residual == doctest::Approx(5.0));

  const auto none = match_gaps(peaks, GapTable{}, 0.1);
  for (const auto& a : none) CHECK_FALSE(a.gap.has_value());
  CHECK(match_gaps({}, table({1.0}), 0.1).empty());
  CHECK_THROWS_AS(match_gaps(peaks, table({1.0}), 0.0), std::invalid_argument);

  // A gap is used once: the closer peak wins it.
  const auto shared = match_gaps({{1.04, 1.0, 1}, {1.01, 2.0, 2}}, table({1.0}), 0.1);
  CHECK_FALSE(shared[0].gap.has_value());
  CHECK(shared[1].gap.has_value());

  // Permuting the peaks permutes the assignments.
  const std::vector<Peak> tied{{1.0, 1.0, 1}, {1.1, 1.0, 2}, {1.2, 1.0, 3}};
  const GapTable g = table({1.05, 1.15});
  const auto a = match_gaps(tied, g, 0.06);
  const auto b = match_gaps({tied[2], tied[0], tied[1]}, g, 0.06);
  auto same = [](const PeakAssignment& x, const PeakAssignment& y) {
    return x.gap.has_value() == y.gap.has_value() && (!x.gap || x.gap->delta == y.gap->delta);
  };
  CHECK(same(a[0], b[1]));
  CHECK(same(a[1], b[2]));
  CHECK(same(a[2], b[0]));
}
