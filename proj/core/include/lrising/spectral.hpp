#pragma once

// Hamming-windowed Fourier spectroscopy:
//   F(w_k) = sum_n w_n [O(t_n) - mean] exp(i w_k t_n),  w_k = 2 pi k / (N_t dt).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrising/gap_table.hpp"

namespace lrising {

struct Spectrum {
  std::vector<double> omegas;
  std::vector<double> magnitudes;
  std::string window = "hamming";
  double t_min = 0.0;
  double t_max = 0.0;
  double dt = 0.0;

  std::size_t size() const { return omegas.size(); }
  /// 2 pi / (N_t dt)
  double bin_width() const;
  /// Largest k with w_k <= pi / dt.
  std::size_t nyquist_index() const { return size() / 2; }
};

/// w_n = 0.54 - 0.46 cos(2 pi n / (N - 1)). Throws for N < 2.
std::vector<double> hamming_window(std::size_t N);

/// Windowed DFT of the samples with t_min <= t <= t_max. Throws
/// std::invalid_argument for a non-uniform grid or fewer than two samples.
Spectrum fft_spectrum(std::span<const double> times, std::span<const double> values, double t_min,
                      double t_max);

struct Peak {
  double omega = 0.0;
  double magnitude = 0.0;
  std::size_t bin = 0;
};

/// Local maxima in 1 <= k <= Nyquist with magnitude >= rel_threshold times
/// the global maximum of that range, refined by a parabola through the log
/// magnitudes of the three surrounding bins. Descending magnitude.
std::vector<Peak> detect_peaks(const Spectrum& spectrum, double rel_threshold = 0.05);

struct PeakAssignment {
  double peak_omega = 0.0;
  double peak_magnitude = 0.0;
  std::optional<GapEntry> gap;
  double residual = 0.0;
};

/// Greedy matching by ascending |omega - delta|; a gap is used at most once
/// and only pairs with residual <= tol are accepted. Output follows the
/// order of `peaks`.
std::vector<PeakAssignment> match_gaps(const std::vector<Peak>& peaks, const GapTable& gaps,
                                       double tol);

}  // namespace lrising
