#include "dsloss/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>

#include <zlib.h>

#include "dsloss/error.hpp"
#include "dsloss/moments.hpp"

namespace dsloss {

namespace {

std::vector<unsigned char> serialize_f64le(std::span<const double> v) {
  std::vector<unsigned char> bytes(v.size() * sizeof(double));
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::uint64_t u;
    static_assert(sizeof(u) == sizeof(double));
    std::memcpy(&u, &v[i], sizeof(u));
    for (int b = 0; b < 8; ++b) {
      bytes[i * 8 + static_cast<std::size_t>(b)] =
          static_cast<unsigned char>((u >> (8 * b)) & 0xff);
    }
  }
  return bytes;
}

// Length of the gzip (level 6) compression of `data`.
std::size_t gzip_length(std::span<const unsigned char> data) {
  z_stream zs{};
  // windowBits 15+16 selects the gzip container, matching a stock gzip
  // stream byte for byte apart from the payload.
  if (deflateInit2(&zs, 6, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
    throw Error("ncd: zlib initialisation failed");
  }
  std::vector<unsigned char> out(deflateBound(&zs, static_cast<uLong>(data.size())));
  zs.next_in = const_cast<unsigned char*>(data.data());
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  const std::size_t produced = zs.total_out;
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) {
    throw Error("ncd: zlib compression failed (rc=" + std::to_string(rc) + ")");
  }
  return produced;
}

// Shared correlation-to-distance step with the zero-variance rules: an
// undefined reference (zero-variance x) is an error, a flat candidate y
// correlates as r = 0.
void correlation_distances(std::span<const double> x, std::span<const double> y,
                           const char* what, double& pcc_dist, double& scc_dist) {
  if (variance(x) == 0.0) {
    throw DataError(std::string(what) + ": original has zero variance, correlation undefined");
  }
  pcc_dist = 1.0 - pearson(x, y);
  scc_dist = 1.0 - spearman(x, y);
}

void normalize_power(std::vector<double>& power) {
  const double total = compensated_sum(power);
  if (total <= 0.0) return;  // all-zero spectrum stays all-zero
  for (double& p : power) p /= total;
}

double interp_at(const std::vector<double>& xs, const std::vector<double>& ys,
                 double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + t * (ys[hi] - ys[lo]);
}

double psd_distance_from(const PsdEstimate& px, double x_rate, const PsdEstimate& py,
                         double y_rate) {
  const double min_nyquist = 0.5 * std::min(x_rate, y_rate);
  double acc = 0.0;
  for (std::size_t i = 0; i < px.freqs_hz.size(); ++i) {
    const double f = px.freqs_hz[i];
    const double other =
        f <= min_nyquist + 1e-9 ? interp_at(py.freqs_hz, py.power, f) : 0.0;
    const double d = px.power[i] - other;
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace

const std::array<std::string_view, MetricVector::kCount>& MetricVector::names() {
  static const std::array<std::string_view, kCount> kNames = {
      "rmse",       "nmse",       "pcc_dist",   "scc_dist",         "env_pcc_dist",
      "env_scc_dist", "zcr_delta", "peak_count_delta", "skew_delta", "kurt_delta",
      "psd_euclidean", "ncd",     "jsd"};
  return kNames;
}

std::array<double, MetricVector::kCount> MetricVector::to_array() const {
  return {rmse,       nmse,       pcc_dist,   scc_dist,   env_pcc_dist,
          env_scc_dist, zcr_delta, peak_count_delta, skew_delta, kurt_delta,
          psd_euclidean, ncd,      jsd};
}

MetricVector MetricVector::from_array(const std::array<double, kCount>& a) {
  MetricVector m;
  m.rmse = a[0];
  m.nmse = a[1];
  m.pcc_dist = a[2];
  m.scc_dist = a[3];
  m.env_pcc_dist = a[4];
  m.env_scc_dist = a[5];
  m.zcr_delta = a[6];
  m.peak_count_delta = a[7];
  m.skew_delta = a[8];
  m.kurt_delta = a[9];
  m.psd_euclidean = a[10];
  m.ncd = a[11];
  m.jsd = a[12];
  return m;
}

AlignedPair align(const Signal& original, const Signal& downsampled) {
  const std::size_t n = original.values.size();
  const auto& dv = downsampled.values;
  if (n == 0 || dv.empty()) throw DataError("align: empty signal");

  std::vector<std::size_t> pos;
  if (downsampled.source_indices.has_value()) {
    pos = *downsampled.source_indices;
    if (pos.size() != dv.size()) {
      throw DataError("align: provenance length does not match sample count");
    }
  } else {
    if (!(original.sample_rate_hz > 0.0) || !(downsampled.sample_rate_hz > 0.0)) {
      throw DataError("align: no source indices and no usable sample rates");
    }
    const double ratio = original.sample_rate_hz / downsampled.sample_rate_hz;
    const auto k = static_cast<std::size_t>(std::llround(ratio));
    if (k < 1 || std::abs(ratio - static_cast<double>(k)) > 1e-6 * ratio) {
      throw DataError("align: no source indices and a non-integer rate ratio");
    }
    pos.resize(dv.size());
    for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = i * k;
  }

  if (pos.back() >= n) {
    throw DataError("align: retained position beyond the original grid");
  }
  for (std::size_t i = 1; i < pos.size(); ++i) {
    if (pos[i] <= pos[i - 1]) {
      throw DataError("align: retained positions not strictly increasing");
    }
  }

  AlignedPair out;
  out.x = original.values;
  out.y.resize(n);
  std::size_t seg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i <= pos.front()) {
      out.y[i] = dv.front();
    } else if (i >= pos.back()) {
      out.y[i] = dv.back();
    } else {
      while (pos[seg + 1] <= i) ++seg;
      if (pos[seg] == i) {
        out.y[i] = dv[seg];  // retained samples are reproduced exactly
      } else {
        const double t = static_cast<double>(i - pos[seg]) /
                         static_cast<double>(pos[seg + 1] - pos[seg]);
        out.y[i] = dv[seg] + t * (dv[seg + 1] - dv[seg]);
      }
    }
  }
  return out;
}

PointwiseMetrics pointwise_metrics(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DataError("pointwise: need equal lengths of at least 2 samples");
  }
  const std::size_t n = x.size();
  const double mx = mean(x);
  double sq_err = 0.0;
  double sq_dev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = x[i] - y[i];
    sq_err += e * e;
    const double d = x[i] - mx;
    sq_dev += d * d;
  }
  PointwiseMetrics m;
  m.rmse = std::sqrt(sq_err / static_cast<double>(n));
  if (sq_dev == 0.0) {
    throw DataError("pointwise: original has zero variance, nmse undefined");
  }
  m.nmse = sq_err / sq_dev;
  correlation_distances(x, y, "pointwise", m.pcc_dist, m.scc_dist);
  return m;
}

EnvelopeMetrics envelope_metrics(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 8) {
    throw DataError("envelope: need equal lengths of at least 8 samples");
  }
  const auto env_x = analytic_envelope(x);
  const auto env_y = analytic_envelope(y);
  EnvelopeMetrics m;
  correlation_distances(env_x, env_y, "envelope", m.env_pcc_dist, m.env_scc_dist);
  return m;
}

ScalarDeltas scalar_deltas(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 4 || y.size() < 4) {
    throw DataError("scalar_deltas: need at least 4 samples per signal");
  }
  ScalarDeltas d;
  d.zcr_delta = std::abs(zero_crossing_rate(x) - zero_crossing_rate(y));
  d.peak_count_delta = std::abs(static_cast<double>(count_peaks(x)) -
                                static_cast<double>(count_peaks(y)));
  d.skew_delta = std::abs(skewness(x) - skewness(y));
  d.kurt_delta = std::abs(kurtosis(x) - kurtosis(y));
  return d;
}

double psd_distance(const Signal& x, const Signal& y) {
  if (x.size() < 32 || y.size() < 32) {
    throw DataError("psd_distance: need at least 32 samples per signal");
  }
  auto px = welch_psd(x.values, x.sample_rate_hz);
  auto py = welch_psd(y.values, y.sample_rate_hz);
  normalize_power(px.power);
  normalize_power(py.power);
  return psd_distance_from(px, x.sample_rate_hz, py, y.sample_rate_hz);
}

double ncd(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw DataError("ncd: empty input");
  const auto bx = serialize_f64le(x);
  auto bxy = bx;
  const auto by = serialize_f64le(y);
  bxy.insert(bxy.end(), by.begin(), by.end());
  const std::size_t cx = gzip_length(bx);
  const std::size_t cy = gzip_length(by);
  const std::size_t cxy = gzip_length(bxy);
  const double v = (static_cast<double>(cxy) - static_cast<double>(std::min(cx, cy))) /
                   static_cast<double>(std::max(cx, cy));
  return std::clamp(v, 0.0, 1.1);
}

double jsd(std::span<const double> x, std::span<const double> y, std::size_t bins) {
  if (x.empty() || y.empty()) throw DataError("jsd: empty input");
  if (bins < 1) throw ConfigError("jsd: need at least one bin");
  double lo = x[0];
  double hi = x[0];
  for (const double v : x) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (const double v : y) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo == hi) return 0.0;  // a single shared bin: identical distributions

  const auto histogram = [&](std::span<const double> v) {
    std::vector<double> h(bins, 0.0);
    for (const double s : v) {
      auto b = static_cast<std::size_t>((s - lo) / (hi - lo) * static_cast<double>(bins));
      h[std::min(b, bins - 1)] += 1.0;  // top edge belongs to the last bin
    }
    const double n = static_cast<double>(v.size());
    for (double& c : h) c = c / n + 1e-12;
    const double total = 1.0 + static_cast<double>(bins) * 1e-12;
    for (double& c : h) c /= total;
    return h;
  };

  const auto p = histogram(x);
  const auto q = histogram(y);
  double acc = 0.0;
  for (std::size_t i = 0; i < bins; ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    acc += 0.5 * p[i] * std::log2(p[i] / m) + 0.5 * q[i] * std::log2(q[i] / m);
  }
  return std::max(acc, 0.0);
}

double jsd(std::span<const double> x, std::span<const double> y) {
  return jsd(x, y, 64);
}

OriginalCache make_original_cache(const Signal& original) {
  if (original.size() < 32) {
    throw DataError("metric cache: original needs at least 32 samples");
  }
  OriginalCache c;
  c.envelope = analytic_envelope(original.values);
  c.psd = welch_psd(original.values, original.sample_rate_hz);
  normalize_power(c.psd.power);
  c.bytes = serialize_f64le(original.values);
  c.compressed_len = gzip_length(c.bytes);
  c.zcr = zero_crossing_rate(original.values);
  c.skew = skewness(original.values);
  c.kurt = kurtosis(original.values);
  c.peak_count = count_peaks(original.values);
  return c;
}

MetricVector metric_profile(const Signal& original, const OriginalCache& cache,
                            const Signal& downsampled) {
  if (downsampled.size() < 4) {
    throw DataError("metric_profile: downsampled signal has fewer than 4 samples");
  }
  MetricVector m;

  const auto aligned = align(original, downsampled);
  const auto pw = pointwise_metrics(aligned.x, aligned.y);
  m.rmse = pw.rmse;
  m.nmse = pw.nmse;
  m.pcc_dist = pw.pcc_dist;
  m.scc_dist = pw.scc_dist;

  const auto env_y = analytic_envelope(aligned.y);
  correlation_distances(cache.envelope, env_y, "envelope", m.env_pcc_dist,
                        m.env_scc_dist);

  const auto& raw = downsampled.values;
  m.zcr_delta = std::abs(cache.zcr - zero_crossing_rate(raw));
  m.peak_count_delta = std::abs(static_cast<double>(cache.peak_count) -
                                static_cast<double>(count_peaks(raw)));
  m.skew_delta = std::abs(cache.skew - skewness(raw));
  m.kurt_delta = std::abs(cache.kurt - kurtosis(raw));

  if (raw.size() < 32) {
    throw DataError("metric_profile: downsampled signal too short for a PSD (needs 32)");
  }
  auto py = welch_psd(raw, downsampled.sample_rate_hz);
  normalize_power(py.power);
  m.psd_euclidean = psd_distance_from(cache.psd, original.sample_rate_hz, py,
                                      downsampled.sample_rate_hz);

  auto bxy = cache.bytes;
  const auto by = serialize_f64le(raw);
  bxy.insert(bxy.end(), by.begin(), by.end());
  const std::size_t cy = gzip_length(by);
  const std::size_t cxy = gzip_length(bxy);
  const double v =
      (static_cast<double>(cxy) - static_cast<double>(std::min(cache.compressed_len, cy))) /
      static_cast<double>(std::max(cache.compressed_len, cy));
  m.ncd = std::clamp(v, 0.0, 1.1);

  m.jsd = jsd(original.values, raw);
  return m;
}

MetricVector metric_profile(const Signal& original, const Signal& downsampled) {
  return metric_profile(original, make_original_cache(original), downsampled);
}

ConfigMetricSummary summarize_config(const std::vector<MetricVector>& profiles,
                                     const DownsampleConfig& config) {
  if (profiles.empty()) {
    throw DataError("summarize_config: no metric profiles to aggregate");
  }
  ConfigMetricSummary s;
  s.config = config;
  s.n_pairs = profiles.size();

  std::array<double, MetricVector::kCount> means{};
  std::array<double, MetricVector::kCount> stds{};
  const double n = static_cast<double>(profiles.size());
  std::vector<double> column(profiles.size());
  for (std::size_t m = 0; m < MetricVector::kCount; ++m) {
    for (std::size_t i = 0; i < profiles.size(); ++i) column[i] = profiles[i][m];
    const double mu = compensated_sum(column) / n;
    means[m] = mu;
    std::vector<double> sq(profiles.size());
    for (std::size_t i = 0; i < profiles.size(); ++i) {
      const double d = column[i] - mu;
      sq[i] = d * d;
    }
    stds[m] = std::sqrt(compensated_sum(sq) / n);
  }
  s.mean_metrics = MetricVector::from_array(means);
  s.std_metrics = MetricVector::from_array(stds);
  return s;
}

}  // namespace dsloss
