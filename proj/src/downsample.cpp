#include "dsloss/downsample.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cmath>
#include <numeric>
#include <utility>

#include "dsloss/error.hpp"
#include "dsloss/fir.hpp"

namespace dsloss {

namespace {

void require_factor(int k) {
  if (k < 1) {
    throw ConfigError("downsample: factor must be >= 1, got " + std::to_string(k));
  }
}

// Copies the selected samples into a new signal whose nominal rate is the
// input rate divided by the reduction factor. `indices` must be strictly
// increasing; they become the provenance record of the output.
Signal gather(const Signal& in, std::vector<std::size_t> indices, int k) {
  Signal out;
  out.values.reserve(indices.size());
  for (const std::size_t i : indices) out.values.push_back(in.values[i]);
  out.sample_rate_hz = in.sample_rate_hz / k;
  out.source_indices = std::move(indices);
  return out;
}

// argmin/argmax over [lo, hi); ties resolve to the earliest index.
std::pair<std::size_t, std::size_t> group_extrema(std::span<const double> v,
                                                  std::size_t lo, std::size_t hi) {
  std::size_t imin = lo;
  std::size_t imax = lo;
  for (std::size_t i = lo + 1; i < hi; ++i) {
    if (v[i] < v[imin]) imin = i;
    if (v[i] > v[imax]) imax = i;
  }
  return {imin, imax};
}

std::vector<std::size_t> keep_everything(std::size_t n) {
  std::vector<std::size_t> keep(n);
  std::iota(keep.begin(), keep.end(), std::size_t{0});
  return keep;
}

// Largest-triangle-three-buckets selection over an (x, y) polyline. Both
// endpoints are always kept; each of the n_out - 2 interior buckets
// contributes the point spanning the largest triangle against the
// previously kept point and the mean of the following bucket (the final
// point itself after the last bucket). Area ties keep the earliest point.
std::vector<std::size_t> lttb_select(std::span<const double> xs,
                                     std::span<const double> ys,
                                     std::size_t n_out) {
  const std::size_t n = xs.size();
  if (n_out >= n) return keep_everything(n);

  std::vector<std::size_t> keep;
  keep.reserve(n_out);
  keep.push_back(0);
  const std::size_t buckets = n_out - 2;
  std::size_t prev = 0;
  for (std::size_t b = 0; b < buckets; ++b) {
    const std::size_t lo = 1 + b * (n - 2) / buckets;
    const std::size_t hi = 1 + (b + 1) * (n - 2) / buckets;
    double ax = 0.0;
    double ay = 0.0;
    if (b + 1 < buckets) {
      const std::size_t next_hi = 1 + (b + 2) * (n - 2) / buckets;
      for (std::size_t i = hi; i < next_hi; ++i) {
        ax += xs[i];
        ay += ys[i];
      }
      ax /= static_cast<double>(next_hi - hi);
      ay /= static_cast<double>(next_hi - hi);
    } else {
      ax = xs[n - 1];
      ay = ys[n - 1];
    }
    double best = -1.0;
    std::size_t pick = lo;
    for (std::size_t i = lo; i < hi; ++i) {
      // Twice the triangle area; the constant factor does not affect the
      // argmax.
      const double area = std::abs((xs[prev] - ax) * (ys[i] - ys[prev]) -
                                   (xs[prev] - xs[i]) * (ay - ys[prev]));
      if (area > best) {
        best = area;
        pick = i;
      }
    }
    keep.push_back(pick);
    prev = pick;
  }
  keep.push_back(n - 1);
  return keep;
}

std::size_t checked_n_out(const char* who, std::size_t n, int k) {
  const std::size_t n_out = n / static_cast<std::size_t>(k);
  if (n_out < 2) {
    throw DataError(std::string(who) + ": factor " + std::to_string(k) +
                    " too large for " + std::to_string(n) + " samples");
  }
  return n_out;
}

}  // namespace

Algorithm parse_algorithm(const std::string& name) {
  std::string lower;
  lower.reserve(name.size());
  for (const char c : name) {
    lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (lower == "decimate") return Algorithm::Decimate;
  if (lower == "minmax") return Algorithm::MinMax;
  if (lower == "m4") return Algorithm::M4;
  if (lower == "lttb") return Algorithm::Lttb;
  if (lower == "minmaxlttb") return Algorithm::MinMaxLttb;
  throw ConfigError("unknown algorithm '" + name +
                    "' (expected Decimate, MinMax, M4, LTTB or MinMaxLTTB)");
}

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Decimate: return "Decimate";
    case Algorithm::MinMax: return "MinMax";
    case Algorithm::M4: return "M4";
    case Algorithm::Lttb: return "LTTB";
    case Algorithm::MinMaxLttb: return "MinMaxLTTB";
  }
  throw ConfigError("algorithm_name: unknown algorithm value");
}

std::string DownsampleConfig::id() const {
  std::string s = algorithm_name(algorithm) + "_k" + std::to_string(factor);
  if (algorithm == Algorithm::MinMaxLttb) s += "_r" + std::to_string(preselect_ratio);
  return s;
}

Signal decimate(const Signal& signal, int k) {
  require_factor(k);
  if (k == 1) return Signal{signal.values, signal.sample_rate_hz, std::nullopt};

  std::vector<double> values = signal.values;
  for (const int q : decimate_stages(k)) {
    const int order = 20 * std::min(q, 13);
    const auto taps = design_lowpass_fir(order, 0.5 / q);
    if (values.size() < taps.size()) {
      throw DataError("decimate: signal of " + std::to_string(values.size()) +
                      " samples too short for the stage-" + std::to_string(q) +
                      " filter (" + std::to_string(taps.size()) + " taps)");
    }
    const auto filtered = filtfilt(taps, values);
    std::vector<double> kept;
    kept.reserve((filtered.size() + q - 1) / q);
    for (std::size_t i = 0; i < filtered.size(); i += static_cast<std::size_t>(q)) {
      kept.push_back(filtered[i]);
    }
    values = std::move(kept);
  }

  Signal out;
  out.values = std::move(values);
  out.sample_rate_hz = signal.sample_rate_hz / k;
  return out;
}

Signal minmax(const Signal& signal, int k) {
  require_factor(k);
  const std::size_t n = signal.values.size();
  const std::size_t group = 2 * static_cast<std::size_t>(k);
  if (n < group) {
    throw DataError("minmax: need at least " + std::to_string(group) +
                    " samples for factor " + std::to_string(k) + ", got " +
                    std::to_string(n));
  }
  std::vector<std::size_t> keep;
  keep.reserve((n / group + 1) * 2);
  for (std::size_t lo = 0; lo < n; lo += group) {
    const std::size_t hi = std::min(lo + group, n);
    const auto [imin, imax] = group_extrema(signal.values, lo, hi);
    const std::size_t a = std::min(imin, imax);
    const std::size_t b = std::max(imin, imax);
    keep.push_back(a);
    if (b != a) keep.push_back(b);
  }
  return gather(signal, std::move(keep), k);
}

Signal m4(const Signal& signal, int k) {
  require_factor(k);
  const std::size_t n = signal.values.size();
  const std::size_t group = 4 * static_cast<std::size_t>(k);
  if (n < group) {
    throw DataError("m4: need at least " + std::to_string(group) +
                    " samples for factor " + std::to_string(k) + ", got " +
                    std::to_string(n));
  }
  std::vector<std::size_t> keep;
  keep.reserve((n / group + 1) * 4);
  for (std::size_t lo = 0; lo < n; lo += group) {
    const std::size_t hi = std::min(lo + group, n);
    const auto [imin, imax] = group_extrema(signal.values, lo, hi);
    std::array<std::size_t, 4> picks = {lo, imin, imax, hi - 1};
    std::sort(picks.begin(), picks.end());
    for (std::size_t j = 0; j < picks.size(); ++j) {
      if (j == 0 || picks[j] != picks[j - 1]) keep.push_back(picks[j]);
    }
  }
  return gather(signal, std::move(keep), k);
}

Signal lttb(const Signal& signal, int k) {
  require_factor(k);
  const std::size_t n = signal.values.size();
  const std::size_t n_out = checked_n_out("lttb", n, k);
  std::vector<double> xs(n);
  std::iota(xs.begin(), xs.end(), 0.0);
  return gather(signal, lttb_select(xs, signal.values, n_out), k);
}

std::vector<std::size_t> minmax_preselect(std::span<const double> values,
                                          std::size_t n_keep) {
  const std::size_t n = values.size();
  if (n_keep >= n) return keep_everything(n);
  if (n_keep < 4) {
    throw ConfigError("minmax_preselect: n_keep must be >= 4, got " +
                      std::to_string(n_keep));
  }
  // Both endpoints survive; the interior is split into (n_keep - 2) / 2
  // groups, each contributing its min and max.
  const std::size_t groups = (n_keep - 2) / 2;
  const std::size_t interior = n - 2;
  std::vector<std::size_t> keep;
  keep.reserve(n_keep);
  keep.push_back(0);
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t lo = 1 + g * interior / groups;
    const std::size_t hi = 1 + (g + 1) * interior / groups;
    if (lo >= hi) continue;
    const auto [imin, imax] = group_extrema(values, lo, hi);
    const std::size_t a = std::min(imin, imax);
    const std::size_t b = std::max(imin, imax);
    keep.push_back(a);
    if (b != a) keep.push_back(b);
  }
  keep.push_back(n - 1);
  return keep;
}

Signal minmaxlttb(const Signal& signal, int k, int ratio) {
  require_factor(k);
  if (ratio < 2) {
    throw ConfigError("minmaxlttb: preselect ratio must be >= 2, got " +
                      std::to_string(ratio));
  }
  const std::size_t n = signal.values.size();
  const std::size_t n_out = checked_n_out("minmaxlttb", n, k);
  const std::size_t n_pre = static_cast<std::size_t>(ratio) * n_out;
  if (n_pre >= n) return lttb(signal, k);

  const auto pre = minmax_preselect(signal.values, n_pre);
  std::vector<double> xs(pre.size());
  std::vector<double> ys(pre.size());
  for (std::size_t i = 0; i < pre.size(); ++i) {
    xs[i] = static_cast<double>(pre[i]);
    ys[i] = signal.values[pre[i]];
  }
  const auto local = lttb_select(xs, ys, n_out);
  std::vector<std::size_t> keep(local.size());
  for (std::size_t i = 0; i < local.size(); ++i) keep[i] = pre[local[i]];
  return gather(signal, std::move(keep), k);
}

Signal apply_downsample(const Signal& signal, const DownsampleConfig& config) {
  switch (config.algorithm) {
    case Algorithm::Decimate: return decimate(signal, config.factor);
    case Algorithm::MinMax: return minmax(signal, config.factor);
    case Algorithm::M4: return m4(signal, config.factor);
    case Algorithm::Lttb: return lttb(signal, config.factor);
    case Algorithm::MinMaxLttb:
      return minmaxlttb(signal, config.factor, config.preselect_ratio);
  }
  throw ConfigError("apply_downsample: unknown algorithm value");
}

std::vector<GridResult> apply_grid(const LabeledDataset& dataset,
                                   const std::vector<DownsampleConfig>& configs) {
  std::vector<GridResult> results;
  results.reserve(configs.size());
  for (const auto& config : configs) {
    GridResult r;
    r.config = config;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      r.dataset.labels = dataset.labels;
      r.dataset.class_names = dataset.class_names;
      r.dataset.group_ids = dataset.group_ids;
      r.dataset.signals.reserve(dataset.signals.size());
      for (const auto& s : dataset.signals) {
        r.dataset.signals.push_back(apply_downsample(s, config));
      }
    } catch (const std::exception& e) {
      r.dataset = LabeledDataset{};
      r.error = config.id() + ": " + e.what();
    }
    const auto t1 = std::chrono::steady_clock::now();
    r.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace dsloss
