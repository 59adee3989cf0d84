#include "dsloss/features.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <vector>

#include "dsloss/error.hpp"
#include "dsloss/moments.hpp"

namespace dsloss {

const std::array<std::string_view, FeatureVector::kCount>& FeatureVector::names() {
  static const std::array<std::string_view, kCount> kNames = {
      "kurtosis",
      "mean",
      "mean_abs_change",
      "peak_count",
      "peak_to_peak",
      "quantile_change_high",
      "quantile_change_low",
      "quantile_change_mid",
      "rms",
      "skewness",
      "smoothed_peak_count_w1",
      "smoothed_peak_count_w5",
      "spectral_centroid",
      "spectral_rolloff_85",
      "std",
      "zcr"};
  return kNames;
}

std::size_t smoothed_peak_count(std::span<const double> v, std::size_t w) {
  if (w < 1) throw ConfigError("smoothed_peak_count: width must be at least 1");
  if (v.size() < w) return 0;
  const std::size_t n = v.size();

  std::vector<double> smoothed(n);
  if (w == 1) {
    smoothed.assign(v.begin(), v.end());
  } else {
    const std::size_t left = (w - 1) / 2;
    const std::size_t right = w - 1 - left;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t lo = i >= left ? i - left : 0;
      const std::size_t hi = std::min(n - 1, i + right);
      double acc = 0.0;
      for (std::size_t j = lo; j <= hi; ++j) acc += v[j];
      smoothed[i] = acc / static_cast<double>(hi - lo + 1);
    }
  }

  const double threshold = mean(smoothed) + stddev(smoothed);
  std::size_t count = 0;
  std::size_t run = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    if (i < n && smoothed[i] > threshold) {
      ++run;
    } else {
      if (run >= w) ++count;
      run = 0;
    }
  }
  return count;
}

double quantile_band_change(std::span<const double> v, double lo_q, double hi_q) {
  if (v.size() < 2) return 0.0;
  if (!(0.0 <= lo_q && lo_q <= hi_q && hi_q <= 1.0)) {
    throw ConfigError("quantile_band_change: band must satisfy 0 <= lo <= hi <= 1");
  }
  const double lo = quantile(v, lo_q);
  const double hi = quantile(v, hi_q);
  double acc = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const bool a_in = lo <= v[i] && v[i] <= hi;
    const bool b_in = lo <= v[i + 1] && v[i + 1] <= hi;
    if (a_in && b_in) {
      acc += std::abs(v[i + 1] - v[i]);
      ++pairs;
    }
  }
  return pairs > 0 ? acc / static_cast<double>(pairs) : 0.0;
}

double spectral_centroid(const PsdEstimate& psd) {
  double power = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < psd.power.size(); ++i) {
    power += psd.power[i];
    weighted += psd.freqs_hz[i] * psd.power[i];
  }
  if (power <= 0.0) return 0.0;
  return weighted / power;
}

double spectral_rolloff(const PsdEstimate& psd, double fraction) {
  if (!(0.0 < fraction && fraction <= 1.0)) {
    throw ConfigError("spectral_rolloff: fraction must lie in (0, 1]");
  }
  double total = 0.0;
  for (const double p : psd.power) total += p;
  if (total <= 0.0) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < psd.power.size(); ++i) {
    acc += psd.power[i];
    if (acc >= fraction * total) return psd.freqs_hz[i];
  }
  return psd.freqs_hz.back();
}

FeatureExtraction extract_features(const Signal& signal) {
  if (signal.size() < 16) {
    throw DataError("extract_features: signal shorter than 16 samples");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const std::span<const double> v(signal.values);

  const auto psd = welch_psd(v, signal.sample_rate_hz);

  double abs_change = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) abs_change += std::abs(v[i + 1] - v[i]);
  abs_change /= static_cast<double>(v.size() - 1);

  FeatureVector f;
  const auto& names = FeatureVector::names();
  const auto set = [&](std::string_view name, double value) {
    const auto it = std::find(names.begin(), names.end(), name);
    f.values[static_cast<std::size_t>(it - names.begin())] = value;
  };
  set("mean", mean(v));
  set("std", stddev(v));
  set("skewness", skewness(v));
  set("kurtosis", kurtosis(v));
  set("rms", rms(v));
  set("peak_to_peak", peak_to_peak(v));
  set("zcr", zero_crossing_rate(v));
  set("peak_count", static_cast<double>(count_peaks(v)));
  set("smoothed_peak_count_w1", static_cast<double>(smoothed_peak_count(v, 1)));
  set("smoothed_peak_count_w5", static_cast<double>(smoothed_peak_count(v, 5)));
  set("quantile_change_low", quantile_band_change(v, 0.0, 0.2));
  set("quantile_change_mid", quantile_band_change(v, 0.4, 0.6));
  set("quantile_change_high", quantile_band_change(v, 0.8, 1.0));
  set("spectral_centroid", spectral_centroid(psd));
  set("spectral_rolloff_85", spectral_rolloff(psd, 0.85));
  set("mean_abs_change", abs_change);

  for (double& value : f.values) {
    if (!std::isfinite(value)) {
      value = 0.0;
      ++f.n_nonfinite;
    }
  }

  const auto t1 = std::chrono::steady_clock::now();
  FeatureExtraction out;
  out.features = f;
  out.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
  return out;
}

}  // namespace dsloss
