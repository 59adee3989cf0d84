#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "dsloss/downsample.hpp"
#include "dsloss/fft.hpp"
#include "dsloss/signal.hpp"

namespace dsloss {

// The 13-entry distortion battery. Correlation-based entries are stored
// as distances d = 1 - r, so lower always means more similar.
struct MetricVector {
  double rmse = 0.0;
  double nmse = 0.0;
  double pcc_dist = 0.0;
  double scc_dist = 0.0;
  double env_pcc_dist = 0.0;
  double env_scc_dist = 0.0;
  double zcr_delta = 0.0;
  double peak_count_delta = 0.0;
  double skew_delta = 0.0;
  double kurt_delta = 0.0;
  double psd_euclidean = 0.0;
  double ncd = 0.0;
  double jsd = 0.0;

  static constexpr std::size_t kCount = 13;
  static const std::array<std::string_view, kCount>& names();
  std::array<double, kCount> to_array() const;
  static MetricVector from_array(const std::array<double, kCount>& a);
  double operator[](std::size_t i) const { return to_array()[i]; }
};

struct AlignedPair {
  std::vector<double> x;  // original samples
  std::vector<double> y;  // downsampled samples interpolated onto x's grid
};

// Reconstructs the downsampled signal on the original index grid by
// linear interpolation between retained positions, with constant
// extrapolation outside them. Positions come from source_indices; a
// signal without provenance (decimation) uses the uniform stride implied
// by the sample-rate ratio, sample i sitting at original index i*k.
AlignedPair align(const Signal& original, const Signal& downsampled);

struct PointwiseMetrics {
  double rmse = 0.0;
  double nmse = 0.0;
  double pcc_dist = 0.0;
  double scc_dist = 0.0;
};

// RMSE, squared-error normalised by the original's total squared
// deviation, and inverted Pearson/Spearman correlations, all on an
// aligned pair. A zero-variance original leaves nmse/pcc undefined and
// raises DataError; a zero-variance reconstruction yields r = 0 (d = 1).
PointwiseMetrics pointwise_metrics(std::span<const double> x, std::span<const double> y);

struct EnvelopeMetrics {
  double env_pcc_dist = 0.0;
  double env_scc_dist = 0.0;
};

// Inverted correlations between analytic-signal envelopes of an aligned
// pair.
EnvelopeMetrics envelope_metrics(std::span<const double> x, std::span<const double> y);

struct ScalarDeltas {
  double zcr_delta = 0.0;
  double peak_count_delta = 0.0;
  double skew_delta = 0.0;
  double kurt_delta = 0.0;
};

// Absolute differences of per-signal statistics, computed on the raw
// sample sequences (which may differ in length).
ScalarDeltas scalar_deltas(std::span<const double> x, std::span<const double> y);

// Euclidean distance between sum-normalised Welch PSDs, each estimated at
// the signal's own sample rate. The second PSD is linearly interpolated
// onto the first one's frequency bins up to the smaller Nyquist; bins
// above it are compared against zero.
double psd_distance(const Signal& x, const Signal& y);

// Normalised compression distance over little-endian float64 byte
// serialisations, gzip level 6. Clamped to [0, 1.1].
double ncd(std::span<const double> x, std::span<const double> y);

// Jensen-Shannon divergence (log base 2) between histograms over the
// joint value range, smoothed with 1e-12 and renormalised. When every
// value in both inputs is identical the divergence is 0.
double jsd(std::span<const double> x, std::span<const double> y, std::size_t bins);
double jsd(std::span<const double> x, std::span<const double> y);  // 64 bins

// Quantities of an original signal that every configuration's profile
// reuses: computing them once per original removes the dominant
// redundant work from grid-wide profiling.
struct OriginalCache {
  std::vector<double> envelope;
  PsdEstimate psd;                    // power normalised to sum 1
  std::vector<unsigned char> bytes;   // float64 little-endian serialisation
  std::size_t compressed_len = 0;     // gzip length of `bytes`
  double zcr = 0.0;
  double skew = 0.0;
  double kurt = 0.0;
  std::size_t peak_count = 0;
};

OriginalCache make_original_cache(const Signal& original);

// The full battery for one (original, downsampled) pair: pointwise and
// envelope metrics on the aligned reconstruction, scalar deltas and
// distribution/spectral/compression distances on the raw samples.
MetricVector metric_profile(const Signal& original, const OriginalCache& cache,
                            const Signal& downsampled);
MetricVector metric_profile(const Signal& original, const Signal& downsampled);

struct ConfigMetricSummary {
  DownsampleConfig config;
  MetricVector mean_metrics;
  MetricVector std_metrics;  // population standard deviation
  std::size_t n_pairs = 0;
  std::size_t n_excluded = 0;  // pairs dropped for undefined metrics
};

// Elementwise mean and population standard deviation over per-pair
// profiles, order-independent via compensated summation.
ConfigMetricSummary summarize_config(const std::vector<MetricVector>& profiles,
                                     const DownsampleConfig& config);

}  // namespace dsloss
