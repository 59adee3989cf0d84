#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

#include "dsloss/fft.hpp"
#include "dsloss/signal.hpp"

namespace dsloss {

// Compact per-signal feature set used by the classification stage. The
// names() order is the canonical column order everywhere a feature matrix
// appears.
struct FeatureVector {
  static constexpr std::size_t kCount = 16;
  static const std::array<std::string_view, kCount>& names();

  std::array<double, kCount> values{};
  // Entries that came out non-finite are replaced by 0 and counted here.
  int n_nonfinite = 0;

  double operator[](std::size_t i) const { return values[i]; }
};

struct FeatureExtraction {
  FeatureVector features;
  double wall_time_s = 0.0;
};

// Moving-average smoothing of width w ('same' alignment, truncated at the
// edges), then the number of excursions above mean + std of the smoothed
// series that persist for at least w consecutive samples. Width 1 under
// this definition degenerates to counting raw threshold excursions.
std::size_t smoothed_peak_count(std::span<const double> v, std::size_t w);

// Mean absolute successive difference restricted to sample pairs whose
// endpoints both lie inside the [lo_q, hi_q] inter-quantile band; 0 when
// no pair qualifies.
double quantile_band_change(std::span<const double> v, double lo_q, double hi_q);

// Power-weighted mean frequency; 0 for an all-zero spectrum.
double spectral_centroid(const PsdEstimate& psd);

// Smallest frequency below which the given fraction of total power lies;
// 0 for an all-zero spectrum.
double spectral_rolloff(const PsdEstimate& psd, double fraction);

// Computes the full feature set with a monotonic-clock measurement of the
// extraction wall time. Throws DataError for signals shorter than 16
// samples.
FeatureExtraction extract_features(const Signal& signal);

}  // namespace dsloss
