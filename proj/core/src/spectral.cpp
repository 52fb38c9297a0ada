#include "lrising/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include <fftw3.h>

namespace lrising {

namespace {
// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

double Spectrum::bin_width() const {
  return size() == 0 ? 0.0 : 2.0 * std::numbers::pi / (static_cast<double>(size()) * dt);
}

std::vector<double> hamming_window(std::size_t N) {
  if (N < 2) {
    throw std::invalid_argument("hamming_window: need N >= 2");
  }
  std::vector<double> w(N);
  const double denom = static_cast<double>(N - 1);
  for (std::size_t n = 0; n < N; ++n) {
    // Evaluate the cosine on the nearer half so that w_n == w_{N-1-n} bitwise.
    const std::size_t m = std::min(n, N - 1 - n);
    w[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(m) / denom);
  }
  return w;
}

Spectrum fft_spectrum(std::span<const double> times, std::span<const double> values, double t_min,
                      double t_max) {
  if (times.size() != values.size()) {
    throw std::invalid_argument("fft_spectrum: times and values differ in length");
  }
  std::size_t first = times.size();
  std::size_t last = 0;
  const double slack = 1e-9 * std::max({1.0, std::abs(t_min), std::abs(t_max)});
  for (std::size_t n = 0; n < times.size(); ++n) {
    if (times[n] >= t_min - slack && times[n] <= t_max + slack) {
      first = std::min(first, n);
      last = n;
    }
  }
  if (first >= times.size() || last <= first) {
    throw std::invalid_argument("fft_spectrum: window contains fewer than two samples");
  }
  const std::size_t N = last - first + 1;
  const double dt = (times[last] - times[first]) / static_cast<double>(N - 1);
  if (!(dt > 0.0)) {
    throw std::invalid_argument("fft_spectrum: time grid is not increasing");
  }
  for (std::size_t n = first + 1; n <= last; ++n) {
    if (std::abs(times[n] - times[n - 1] - dt) > 1e-6 * dt) {
      throw std::invalid_argument("fft_spectrum: non-uniform time grid at sample " +
                                  std::to_string(n));
    }
  }

  double mean = 0.0;
  for (std::size_t n = 0; n < N; ++n) mean += values[first + n];
  mean /= static_cast<double>(N);
  const auto w = hamming_window(N);

  double* in = fftw_alloc_real(N);
  fftw_complex* out = fftw_alloc_complex(N / 2 + 1);
  fftw_plan plan;
  {
    const std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(N), in, out, FFTW_ESTIMATE);
  }
  for (std::size_t n = 0; n < N; ++n) {
    in[n] = w[n] * (values[first + n] - mean);
  }
  fftw_execute(plan);

  Spectrum s;
  s.t_min = times[first];
  s.t_max = times[last];
  s.dt = dt;
  s.omegas.resize(N);
  s.magnitudes.resize(N);
  const double dw = 2.0 * std::numbers::pi / (static_cast<double>(N) * dt);
  for (std::size_t k = 0; k < N; ++k) {
    s.omegas[k] = dw * static_cast<double>(k);
    // exp(+i w_k t_n) is the conjugate kernel of FFTW's forward transform;
    // the magnitudes coincide and |F_{N-k}| = |F_k| for real input.
    const std::size_t j = k <= N / 2 ? k : N - k;
    s.magnitudes[k] = std::hypot(out[j][0], out[j][1]);
  }
  {
    const std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(out);
  fftw_free(in);
  return s;
}

std::vector<Peak> detect_peaks(const Spectrum& spectrum, double rel_threshold) {
  if (!(rel_threshold > 0.0 && rel_threshold < 1.0)) {
    throw std::invalid_argument("detect_peaks: rel_threshold must lie in (0, 1)");
  }
  std::vector<Peak> peaks;
  const auto& m = spectrum.magnitudes;
  const std::size_t kmax = spectrum.nyquist_index();
  if (spectrum.size() < 3 || kmax < 1) {
    return peaks;
  }
  double top = 0.0;
  for (std::size_t k = 1; k <= kmax; ++k) top = std::max(top, m[k]);
  if (!(top > 0.0)) {
    return peaks;
  }
  const double floor = rel_threshold * top;
  const double dw = spectrum.bin_width();
  for (std::size_t k = 1; k <= kmax; ++k) {
    const double left = m[k - 1];
    const double right = k + 1 < spectrum.size() ? m[k + 1] : 0.0;
    // Plateaus count once, at their first bin.
    if (!(m[k] > left && m[k] >= right) || m[k] < floor) {
      continue;
    }
    Peak p{spectrum.omegas[k], m[k], k};
    if (left > 0.0 && right > 0.0) {
      const double a = std::log(left);
      const double b = std::log(m[k]);
      const double c = std::log(right);
      const double denom = a - 2.0 * b + c;
      if (denom < 0.0) {
        const double shift = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
        p.omega = spectrum.omegas[k] + shift * dw;
        p.magnitude = std::exp(b - 0.25 * (a - c) * shift);
      }
    }
    peaks.push_back(p);
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak& x, const Peak& y) { return x.magnitude > y.magnitude; });
  return peaks;
}

std::vector<PeakAssignment> match_gaps(const std::vector<Peak>& peaks, const GapTable& gaps,
                                       double tol) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("match_gaps: tol must be positive");
  }
  struct Candidate {
    double residual;
    double omega;
    std::size_t peak;
    std::size_t gap;
  };
  std::vector<Candidate> candidates;
  for (std::size_t p = 0; p < peaks.size(); ++p) {
    for (std::size_t g = 0; g < gaps.entries.size(); ++g) {
      const double r = std::abs(peaks[p].omega - gaps.entries[g].delta);
      if (r <= tol) {
        candidates.push_back({r, peaks[p].omega, p, g});
      }
    }
  }
  // Ties are broken by peak frequency and gap position, never by input
  // order of the peaks, so permuting the peaks leaves the matching unchanged.
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.residual, a.omega, a.gap) < std::tie(b.residual, b.omega, b.gap);
  });
  std::vector<PeakAssignment> out(peaks.size());
  std::vector<bool> peak_done(peaks.size(), false);
  std::vector<bool> gap_used(gaps.entries.size(), false);
  // Unassigned peaks report the distance to the nearest gap (infinity if none).
  for (std::size_t p = 0; p < peaks.size(); ++p) {
    out[p].peak_omega = peaks[p].omega;
    out[p].peak_magnitude = peaks[p].magnitude;
    out[p].residual = std::numeric_limits<double>::infinity();
    for (const auto& e : gaps.entries) {
      out[p].residual = std::min(out[p].residual, std::abs(peaks[p].omega - e.delta));
    }
  }
  for (const auto& c : candidates) {
    if (peak_done[c.peak] || gap_used[c.gap]) {
      continue;
    }
    peak_done[c.peak] = true;
    gap_used[c.gap] = true;
    out[c.peak].gap = gaps.entries[c.gap];
    out[c.peak].residual = c.residual;
  }
  return out;
}

}  // namespace lrising
