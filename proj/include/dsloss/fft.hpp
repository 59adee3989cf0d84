#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace dsloss {

// In-place complex FFT for arbitrary length. Power-of-two sizes use the
// iterative radix-2 algorithm; other sizes go through Bluestein's chirp-z
// reformulation. Inverse transforms include the 1/N factor.
void fft_inplace(std::vector<std::complex<double>>& data, bool inverse);

std::vector<std::complex<double>> fft_real(std::span<const double> x);

// Magnitude of the analytic signal (one-sided spectrum doubling), the
// envelope estimator behind the envelope correlation metrics.
std::vector<double> analytic_envelope(std::span<const double> x);

struct PsdEstimate {
  std::vector<double> freqs_hz;
  std::vector<double> power;
};

// Welch PSD: Hann-windowed segments with 50% overlap, per-segment mean
// removal, one-sided output. Default segment length is
// min(256, floor(n/2)).
PsdEstimate welch_psd(std::span<const double> x, double sample_rate_hz,
                      std::size_t nperseg);

PsdEstimate welch_psd(std::span<const double> x, double sample_rate_hz);

}  // namespace dsloss
