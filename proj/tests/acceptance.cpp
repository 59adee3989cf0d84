// Acceptance harness: ten numbered end-to-end checks, each printing one
// PASS/FAIL line with its measured numbers and pinned tolerances. The exit
// status is the number of failed checks, so CI fails when any line does.
//
// Every reference quantity here is computed by a deliberately naive
// implementation (direct summation, O(n^2) scans, spelled-out selection
// rules) that shares no code with the library internals.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dsloss/analysis.hpp"
#include "dsloss/classify.hpp"
#include "dsloss/downsample.hpp"
#include "dsloss/error.hpp"
#include "dsloss/features.hpp"
#include "dsloss/fft.hpp"
#include "dsloss/metrics.hpp"
#include "dsloss/moments.hpp"
#include "dsloss/ranking.hpp"
#include "dsloss/rng.hpp"
#include "dsloss/signal.hpp"
#include "dsloss/stats.hpp"
#include "dsloss/workflow.hpp"

namespace fs = std::filesystem;
using namespace dsloss;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

template <typename F>
Outcome guarded(F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {false, std::string("unexpected exception: ") + e.what()};
  }
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

Signal make_signal(std::vector<double> values, double rate) {
  Signal s;
  s.values = std::move(values);
  s.sample_rate_hz = rate;
  return s;
}

Signal random_signal(std::size_t n, std::uint64_t seed, double rate = 1000.0) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return make_signal(std::move(v), rate);
}

// ---------------------------------------------------------------------------
// 1. Selection downsamplers against spelled-out per-group references
// ---------------------------------------------------------------------------

std::vector<std::size_t> minmax_reference(const std::vector<double>& v, int k) {
  const std::size_t group = 2 * static_cast<std::size_t>(k);
  std::vector<std::size_t> keep;
  for (std::size_t lo = 0; lo < v.size(); lo += group) {
    const auto first = v.begin() + static_cast<std::ptrdiff_t>(lo);
    const auto last =
        v.begin() + static_cast<std::ptrdiff_t>(std::min(lo + group, v.size()));
    // min_element/max_element return the first occurrence on ties, the
    // documented tie rule.
    std::size_t a = static_cast<std::size_t>(std::min_element(first, last) - v.begin());
    std::size_t b = static_cast<std::size_t>(std::max_element(first, last) - v.begin());
    if (a > b) std::swap(a, b);
    keep.push_back(a);
    if (b != a) keep.push_back(b);
  }
  return keep;
}

std::vector<std::size_t> m4_reference(const std::vector<double>& v, int k) {
  const std::size_t group = 4 * static_cast<std::size_t>(k);
  std::vector<std::size_t> keep;
  for (std::size_t lo = 0; lo < v.size(); lo += group) {
    const std::size_t hi = std::min(lo + group, v.size());
    const auto first = v.begin() + static_cast<std::ptrdiff_t>(lo);
    const auto last = v.begin() + static_cast<std::ptrdiff_t>(hi);
    std::array<std::size_t, 4> picks = {
        lo, static_cast<std::size_t>(std::min_element(first, last) - v.begin()),
        static_cast<std::size_t>(std::max_element(first, last) - v.begin()), hi - 1};
    std::sort(picks.begin(), picks.end());
    for (std::size_t j = 0; j < picks.size(); ++j) {
      if (j == 0 || picks[j] != picks[j - 1]) keep.push_back(picks[j]);
    }
  }
  return keep;
}

// Explicit bucket edges, exhaustive per-bucket area scan with the shoelace
// formula, next-bucket mean anchor (the final point after the last bucket).
std::vector<std::size_t> lttb_reference(const std::vector<double>& y,
                                        std::size_t n_out) {
  const std::size_t n = y.size();
  if (n_out >= n) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  }
  std::vector<std::size_t> keep = {0};
  const std::size_t nb = n_out - 2;
  for (std::size_t b = 0; b < nb; ++b) {
    const std::size_t lo = 1 + (b * (n - 2)) / nb;
    const std::size_t hi = 1 + ((b + 1) * (n - 2)) / nb;
    double next_x, next_y;
    if (b == nb - 1) {
      next_x = static_cast<double>(n - 1);
      next_y = y[n - 1];
    } else {
      const std::size_t nhi = 1 + ((b + 2) * (n - 2)) / nb;
      next_x = next_y = 0.0;
      for (std::size_t i = hi; i < nhi; ++i) {
        next_x += static_cast<double>(i);
        next_y += y[i];
      }
      next_x /= static_cast<double>(nhi - hi);
      next_y /= static_cast<double>(nhi - hi);
    }
    const double px = static_cast<double>(keep.back());
    const double py = y[keep.back()];
    std::size_t best_i = lo;
    double best_area = -1.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double xi = static_cast<double>(i);
      const double area = 0.5 * std::abs(px * (y[i] - next_y) + xi * (next_y - py) +
                                         next_x * (py - y[i]));
      if (area > best_area) {
        best_area = area;
        best_i = i;
      }
    }
    keep.push_back(best_i);
  }
  keep.push_back(n - 1);
  return keep;
}

Outcome check_selection_equivalence() {
  const auto t0 = clock_type::now();
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Rng rng(9000 + static_cast<std::uint64_t>(trial));
    const std::size_t n = 8 + rng.bounded(57);  // 8..64 samples
    std::vector<double> v(n);
    for (auto& x : v) x = rng.normal();
    const Signal s = make_signal(v, 1000.0);

    const int k_mm = 1 + static_cast<int>(rng.bounded(n / 2));
    if (*minmax(s, k_mm).source_indices != minmax_reference(v, k_mm)) ++mismatches;

    const int k_m4 = 1 + static_cast<int>(rng.bounded(n / 4));
    if (*m4(s, k_m4).source_indices != m4_reference(v, k_m4)) ++mismatches;

    const int k_lt = 1 + static_cast<int>(rng.bounded(n / 2));
    if (*lttb(s, k_lt).source_indices != lttb_reference(v, n / static_cast<std::size_t>(k_lt))) {
      ++mismatches;
    }
  }
  const double elapsed = seconds_since(t0);
  return {mismatches == 0 && elapsed < 10.0,
          fmt("MinMax/M4/LTTB selections on 200 random signals (N <= 64): "
              "%d mismatches, %.2f s (limit 10 s)",
              mismatches, elapsed)};
}

// ---------------------------------------------------------------------------
// 2. Decimation passband fidelity and stopband rejection
// ---------------------------------------------------------------------------

Outcome check_decimate_spectral() {
  const double fs = 1000.0;
  const auto sine = [&](double f0) {
    std::vector<double> v(1000);
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = std::sin(2.0 * std::numbers::pi * f0 * static_cast<double>(i) / fs);
    }
    return make_signal(std::move(v), fs);
  };

  // In-band: a 10 Hz unit sine decimated by 10 lands exactly on bin 10 of
  // a 100-point DFT, so the single-bin amplitude is the oracle.
  const auto low = decimate(sine(10.0), 10);
  std::complex<double> acc{0.0, 0.0};
  const std::size_t n = low.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double p =
        -2.0 * std::numbers::pi * 10.0 * static_cast<double>(i) / static_cast<double>(n);
    acc += low.values[i] * std::complex<double>(std::cos(p), std::sin(p));
  }
  const double amplitude = 2.0 * std::abs(acc) / static_cast<double>(n);
  const double amp_err = std::abs(amplitude - 1.0);

  // Stopband: 400 Hz is far above the 50 Hz post-decimation Nyquist and
  // must come out attenuated by at least 20 dB in RMS.
  const auto in_hi = sine(400.0);
  const auto hi = decimate(in_hi, 10);
  const double atten_db = 20.0 * std::log10(rms(in_hi.values) / rms(hi.values));

  return {amp_err < 0.02 && atten_db >= 20.0,
          fmt("10 Hz sine amplitude error %.4f (< 0.02); 400 Hz sine attenuated "
              "%.1f dB (>= 20 dB)",
              amp_err, atten_db)};
}

// ---------------------------------------------------------------------------
// 3. Distortion metrics against naive direct-summation references
// ---------------------------------------------------------------------------

double naive_pcc(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> naive_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = r;
    i = j + 1;
  }
  return ranks;
}

double naive_zcr(const std::vector<double>& v) {
  double flips = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const int a = v[i - 1] >= 0.0 ? 1 : 0;
    const int b = v[i] >= 0.0 ? 1 : 0;
    flips += std::abs(a - b);
  }
  return flips / static_cast<double>(v.size() - 1);
}

// Strict local maxima; a flat run strictly above both sides counts once
// and runs touching either boundary never count.
std::size_t naive_peak_count(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::size_t count = 0;
  std::size_t i = 1;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[j + 1] == v[i]) ++j;
    if (j + 1 < n && v[i - 1] < v[i] && v[j + 1] < v[i]) ++count;
    i = j + 1;
  }
  return count;
}

double naive_standardized_moment(const std::vector<double>& v, int order) {
  double m = 0.0;
  for (const double s : v) m += s;
  m /= static_cast<double>(v.size());
  double var = 0.0, num = 0.0;
  for (const double s : v) {
    var += (s - m) * (s - m);
    num += std::pow(s - m, order);
  }
  var /= static_cast<double>(v.size());
  num /= static_cast<double>(v.size());
  if (var == 0.0) return 0.0;
  return num / std::pow(std::sqrt(var), order);
}

double naive_jsd(const std::vector<double>& x, const std::vector<double>& y,
                 std::size_t bins) {
  double lo = x[0], hi = x[0];
  for (const double v : x) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (const double v : y) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo == hi) return 0.0;
  const auto hist = [&](const std::vector<double>& v) {
    std::vector<double> h(bins, 0.0);
    for (const double s : v) {
      auto b = static_cast<std::size_t>((s - lo) / (hi - lo) * static_cast<double>(bins));
      if (b >= bins) b = bins - 1;
      h[b] += 1.0;
    }
    for (double& c : h) c = c / static_cast<double>(v.size()) + 1e-12;
    double total = 0.0;
    for (const double c : h) total += c;
    for (double& c : h) c /= total;
    return h;
  };
  const auto p = hist(x);
  const auto q = hist(y);
  double out = 0.0;
  for (std::size_t i = 0; i < bins; ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    out += 0.5 * p[i] * std::log2(p[i] / m) + 0.5 * q[i] * std::log2(q[i] / m);
  }
  return out;
}

// Analytic envelope by direct-summation DFT: forward transform, one-sided
// doubling (DC kept, Nyquist kept for even n), inverse transform, modulus.
std::vector<double> naive_envelope(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> root(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = -2.0 * std::numbers::pi * static_cast<double>(j) /
                     static_cast<double>(n);
    root[j] = {std::cos(a), std::sin(a)};
  }
  std::vector<std::complex<double>> spec(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> s{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) s += x[j] * root[(j * k) % n];
    spec[k] = s;
  }
  const std::size_t half = n / 2;
  if (n % 2 == 0) {
    for (std::size_t i = 1; i < half; ++i) spec[i] *= 2.0;
    for (std::size_t i = half + 1; i < n; ++i) spec[i] = 0.0;
  } else {
    for (std::size_t i = 1; i <= half; ++i) spec[i] *= 2.0;
    for (std::size_t i = half + 1; i < n; ++i) spec[i] = 0.0;
  }
  std::vector<double> env(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::complex<double> s{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) s += spec[k] * std::conj(root[(j * k) % n]);
    env[j] = std::abs(s) / static_cast<double>(n);
  }
  return env;
}

struct NaivePsd {
  std::vector<double> freqs;
  std::vector<double> power;
};

// Mean-removed, Hann-windowed, half-overlapping segments; per-bin direct
// DFT sums; one-sided scaling; identical conventions, independent code.
NaivePsd naive_welch(const std::vector<double>& x, double fs) {
  const std::size_t n = x.size();
  const std::size_t nperseg = std::min<std::size_t>(256, n / 2);
  std::vector<double> window(nperseg);
  double win_power = 0.0;
  for (std::size_t i = 0; i < nperseg; ++i) {
    window[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                      static_cast<double>(nperseg)));
    win_power += window[i] * window[i];
  }
  const std::size_t hop = nperseg / 2 > 0 ? nperseg / 2 : 1;
  const std::size_t nbins = nperseg / 2 + 1;
  NaivePsd out;
  out.freqs.resize(nbins);
  for (std::size_t j = 0; j < nbins; ++j) {
    out.freqs[j] = fs * static_cast<double>(j) / static_cast<double>(nperseg);
  }
  out.power.assign(nbins, 0.0);
  std::size_t nseg = 0;
  std::vector<double> seg(nperseg);
  for (std::size_t start = 0; start + nperseg <= n; start += hop) {
    double m = 0.0;
    for (std::size_t i = 0; i < nperseg; ++i) m += x[start + i];
    m /= static_cast<double>(nperseg);
    for (std::size_t i = 0; i < nperseg; ++i) seg[i] = (x[start + i] - m) * window[i];
    for (std::size_t j = 0; j < nbins; ++j) {
      double re = 0.0, im = 0.0;
      for (std::size_t i = 0; i < nperseg; ++i) {
        const double a = -2.0 * std::numbers::pi * static_cast<double>(i * j) /
                         static_cast<double>(nperseg);
        re += seg[i] * std::cos(a);
        im += seg[i] * std::sin(a);
      }
      out.power[j] += re * re + im * im;
    }
    ++nseg;
  }
  const double scale = 1.0 / (fs * win_power * static_cast<double>(nseg));
  for (std::size_t j = 0; j < nbins; ++j) {
    double p = out.power[j] * scale;
    const bool interior = j > 0 && !(nperseg % 2 == 0 && j == nbins - 1);
    if (interior) p *= 2.0;
    out.power[j] = p;
  }
  return out;
}

double naive_psd_distance(const Signal& x, const Signal& y) {
  NaivePsd px = naive_welch(x.values, x.sample_rate_hz);
  NaivePsd py = naive_welch(y.values, y.sample_rate_hz);
  const auto normalize = [](NaivePsd& p) {
    double total = 0.0;
    for (const double v : p.power) total += v;
    if (total > 0.0) {
      for (double& v : p.power) v /= total;
    }
  };
  normalize(px);
  normalize(py);
  const auto interp = [&](double f) {
    if (f <= py.freqs.front()) return py.power.front();
    if (f >= py.freqs.back()) return py.power.back();
    const auto it = std::upper_bound(py.freqs.begin(), py.freqs.end(), f);
    const std::size_t hi = static_cast<std::size_t>(it - py.freqs.begin());
    const std::size_t lo = hi - 1;
    const double t = (f - py.freqs[lo]) / (py.freqs[hi] - py.freqs[lo]);
    return py.power[lo] + t * (py.power[hi] - py.power[lo]);
  };
  const double min_nyquist = 0.5 * std::min(x.sample_rate_hz, y.sample_rate_hz);
  double acc = 0.0;
  for (std::size_t i = 0; i < px.freqs.size(); ++i) {
    const double other = px.freqs[i] <= min_nyquist + 1e-9 ? interp(px.freqs[i]) : 0.0;
    const double d = px.power[i] - other;
    acc += d * d;
  }
  return std::sqrt(acc);
}

Outcome check_metric_equivalence() {
  double max_err = 0.0;
  int ncd_mismatches = 0;
  const auto track = [&max_err](double got, double want) {
    max_err = std::max(max_err, std::abs(got - want));
  };

  for (int trial = 0; trial < 100; ++trial) {
    const std::uint64_t seed = 7100 + static_cast<std::uint64_t>(trial);
    const std::size_t n = 128 + 16 * (static_cast<std::size_t>(trial) % 19);
    const Signal x = random_signal(n, seed, 1000.0);

    // Equal-length pair for the aligned-sample metrics.
    Rng noise(seed + 500000);
    std::vector<double> y_al = x.values;
    for (double& v : y_al) v += 0.3 * noise.normal();

    const PointwiseMetrics pw = pointwise_metrics(x.values, y_al);
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sq += (x.values[i] - y_al[i]) * (x.values[i] - y_al[i]);
    }
    track(pw.rmse, std::sqrt(sq / static_cast<double>(n)));
    double mx = 0.0;
    for (const double v : x.values) mx += v;
    mx /= static_cast<double>(n);
    double dev = 0.0;
    for (const double v : x.values) dev += (v - mx) * (v - mx);
    track(pw.nmse, sq / dev);
    track(pw.pcc_dist, 1.0 - naive_pcc(x.values, y_al));
    track(pw.scc_dist, 1.0 - naive_pcc(naive_ranks(x.values), naive_ranks(y_al)));

    const EnvelopeMetrics env = envelope_metrics(x.values, y_al);
    const auto ex = naive_envelope(x.values);
    const auto ey = naive_envelope(y_al);
    track(env.env_pcc_dist, 1.0 - naive_pcc(ex, ey));
    track(env.env_scc_dist, 1.0 - naive_pcc(naive_ranks(ex), naive_ranks(ey)));

    // Shorter second signal for the length-free metrics.
    const std::size_t m = n / 2;
    std::vector<double> y2(m);
    for (std::size_t i = 0; i < m; ++i) y2[i] = x.values[2 * i] + 0.1 * noise.normal();
    const Signal ys = make_signal(y2, 500.0);

    const ScalarDeltas sd = scalar_deltas(x.values, y2);
    track(sd.zcr_delta, std::abs(naive_zcr(x.values) - naive_zcr(y2)));
    track(sd.peak_count_delta,
          std::abs(static_cast<double>(naive_peak_count(x.values)) -
                   static_cast<double>(naive_peak_count(y2))));
    track(sd.skew_delta, std::abs(naive_standardized_moment(x.values, 3) -
                                  naive_standardized_moment(y2, 3)));
    track(sd.kurt_delta, std::abs(naive_standardized_moment(x.values, 4) -
                                  naive_standardized_moment(y2, 4)));

    track(psd_distance(x, ys), naive_psd_distance(x, ys));
    track(jsd(x.values, y2), naive_jsd(x.values, y2, 64));

    // Compression distance has no closed-form oracle; the contract is
    // byte-exact determinism of repeated evaluations.
    if (ncd(x.values, y2) != ncd(x.values, y2)) ++ncd_mismatches;
  }

  // Identity pair: a factor-1 configuration must profile to (near) zero
  // everywhere; self-compression stays well below the dissimilar regime.
  MuapSpec spec;
  spec.noise_std = 0.05;
  spec.seed = 9;
  const Signal s = synth_muap_signal(spec, 3000.0);
  const MetricVector ident = metric_profile(s, lttb(s, 1));
  double ident_err = 0.0;
  for (std::size_t i = 0; i < MetricVector::kCount; ++i) {
    if (MetricVector::names()[i] == "ncd") continue;
    ident_err = std::max(ident_err, std::abs(ident[i]));
  }

  const bool pass =
      max_err <= 1e-9 && ncd_mismatches == 0 && ident_err <= 1e-9 && ident.ncd < 0.5;
  return {pass, fmt("12 metrics vs naive references on 100 fixtures: max |diff| "
                    "%.2e (<= 1e-9); ncd determinism %d mismatches; identity "
                    "profile max %.2e (<= 1e-9), ncd %.3f (< 0.5)",
                    max_err, ncd_mismatches, ident_err, ident.ncd)};
}

// ---------------------------------------------------------------------------
// 4. Distortion orderings on the synthetic waveform fixture
// ---------------------------------------------------------------------------

Outcome check_distortion_orderings() {
  MuapSpec spec;
  spec.n_phases = 5;
  spec.phase_width_s = 0.0008;
  spec.firing_rate_hz = 12.0;
  spec.noise_std = 0.05;
  spec.duration_s = 1.0;
  spec.seed = 21;
  const Signal s = synth_muap_signal(spec, 8000.0);

  const auto profile_both = [&] {
    return std::pair{metric_profile(s, lttb(s, 25)), metric_profile(s, decimate(s, 25))};
  };
  const auto [lt, dec] = profile_both();
  const auto [lt2, dec2] = profile_both();

  const bool shape = lt.env_pcc_dist < dec.env_pcc_dist && lt.kurt_delta < dec.kurt_delta;
  const bool rhythm = dec.psd_euclidean < lt.psd_euclidean && dec.zcr_delta < lt.zcr_delta;
  const bool deterministic = lt.to_array() == lt2.to_array() &&
                             dec.to_array() == dec2.to_array();
  return {shape && rhythm && deterministic,
          fmt("factor 25: env_pcc_dist %.3f(LTTB) < %.3f(Decimate), kurt_delta "
              "%.2f < %.2f; psd %.3f(Decimate) < %.3f(LTTB), zcr_delta %.3f < "
              "%.3f; deterministic %s",
              lt.env_pcc_dist, dec.env_pcc_dist, lt.kurt_delta, dec.kurt_delta,
              dec.psd_euclidean, lt.psd_euclidean, dec.zcr_delta, lt.zcr_delta,
              deterministic ? "yes" : "NO")};
}

// ---------------------------------------------------------------------------
// 5. Ranking arithmetic and grid recovery
// ---------------------------------------------------------------------------

Outcome check_ranking() {
  const auto t0 = clock_type::now();

  const double all_correct = weighted_accuracy({{1, 0.1}, {1, 0.7}}, 5.0);
  const double plain = weighted_accuracy({{1, 0.3}, {0, 0.6}, {1, 0.9}, {0, 0.2}}, 0.0);
  // Hand evaluation: weights 1 and e^{-ln 2} = 1/2, so (1*1 + 0.5*0)/1.5.
  const double closed = weighted_accuracy({{1, 0.0}, {0, std::log(2.0) / 10.0}}, 10.0);
  const bool hand_ok = all_correct == 1.0 && plain == 0.5 &&
                       std::abs(closed - 2.0 / 3.0) <= 1e-12;

  std::vector<DownsampleConfig> order;
  for (const int k : {2, 5, 10, 25, 50}) order.push_back({Algorithm::Lttb, k});
  std::vector<DownsampleConfig> reversed(order.rbegin(), order.rend());
  const bool tau_ok =
      kendall_tau(order, order) == 1.0 && kendall_tau(order, reversed) == -1.0;

  // Two algorithms x six factors with log-like degradation and mild seeded
  // noise: the learned ranking must recover the true accuracy order.
  std::vector<ConfigMetricSummary> summaries;
  std::vector<ConfigEvaluation> evals;
  Rng rng(91);
  for (const auto alg : {Algorithm::Lttb, Algorithm::Decimate}) {
    const double penalty = alg == Algorithm::Decimate ? 1.3 : 1.0;
    for (const int k : {2, 5, 10, 25, 50, 100}) {
      ConfigMetricSummary s;
      s.config = DownsampleConfig{alg, k};
      const double damage = penalty * std::log(static_cast<double>(k));
      s.mean_metrics.rmse = 0.05 * damage + 0.002 * rng.normal();
      s.mean_metrics.nmse = 0.04 * damage + 0.002 * rng.normal();
      s.mean_metrics.env_pcc_dist = 0.02 * damage + 0.001 * rng.normal();
      s.mean_metrics.jsd = 0.03 * damage + 0.001 * rng.normal();
      summaries.push_back(s);

      ConfigEvaluation e;
      e.config = s.config;
      e.cv.mean_accuracy = 0.95 - 0.04 * damage + 0.001 * rng.normal();
      evals.push_back(e);
    }
  }
  const RankEvaluation ev = evaluate_ranker(summaries, evals, {5.0, 10.0, 20.0}, 5, 1e-3, 7);
  const double elapsed = seconds_since(t0);

  return {hand_ok && tau_ok && ev.n_pairs == 66 && ev.kendall_tau >= 0.9 &&
              elapsed < 60.0,
          fmt("hand weighted accuracies %s; tau(identical)=1, tau(reversed)=-1 %s; "
              "2x6 grid tau %.3f (>= 0.9) over %zu pairs, %.2f s (limit 60 s)",
              hand_ok ? "exact" : "WRONG", tau_ok ? "ok" : "WRONG", ev.kendall_tau,
              ev.n_pairs, elapsed)};
}

// ---------------------------------------------------------------------------
// 6. Rank statistics: Friedman, permutation p, critical difference/factor
// ---------------------------------------------------------------------------

Outcome check_statistics() {
  // Ranks per row: (1,2,3), (3,1,2), (1,3,2), (1,2,3); rank sums 6, 8, 10;
  // statistic = 12/(4*3*4)*(36+64+100) - 3*4*4 = 2; p = exp(-1) at 2 df.
  const std::vector<std::vector<double>> hand = {
      {0.1, 0.2, 0.3}, {0.3, 0.1, 0.2}, {0.1, 0.3, 0.2}, {0.1, 0.2, 0.3}};
  const FriedmanResult fr = friedman_test(hand);
  const double stat_err = std::abs(fr.statistic - 2.0);
  const double p_err = std::abs(fr.p_value - std::exp(-1.0));

  // Moderate-effect matrix where the chi-square approximation is reliable;
  // the seeded permutation p must agree within the stated band.
  Rng rng(404);
  std::vector<std::vector<double>> m(20, std::vector<double>(5));
  const double base[5] = {0.800, 0.798, 0.796, 0.794, 0.788};
  for (auto& row : m) {
    for (std::size_t j = 0; j < 5; ++j) row[j] = base[j] + 0.02 * rng.normal();
  }
  const double analytic = friedman_test(m).p_value;
  const double permuted = friedman_permutation_p(m, 10000, 17);
  const double perm_err = std::abs(permuted - analytic);

  const double cd = nemenyi_critical_difference(2, 10, 0.05);
  const double cd_err = std::abs(cd - 1.960 * std::sqrt(6.0 / 60.0));

  // Factors below 30 match the original (0.9), factors from 30 drop to
  // 0.7, fold noise 0.01: the first significant factor must be 30.
  Rng fold_rng(11);
  const int folds = 10;
  std::vector<double> original;
  for (int i = 0; i < folds; ++i) original.push_back(0.9 + 0.01 * fold_rng.normal());
  std::map<int, std::vector<double>> per_factor;
  for (const int factor : {5, 10, 20, 30, 40, 50}) {
    const double level = factor >= 30 ? 0.7 : 0.9;
    for (int i = 0; i < folds; ++i) {
      per_factor[factor].push_back(level + 0.01 * fold_rng.normal());
    }
  }
  const std::optional<int> cf = critical_factor(per_factor, original);

  const bool pass = stat_err <= 1e-9 && p_err <= 1e-9 && perm_err <= 0.02 &&
                    cd_err <= 1e-3 && cf.has_value() && *cf == 30;
  return {pass, fmt("Friedman hand fixture |dStat| %.1e, |dp| %.1e (<= 1e-9); "
                    "permutation |dp| %.3f (<= 0.02); CD(2,10) err %.1e (<= 1e-3); "
                    "degradation fixture critical factor %s (expect 30)",
                    stat_err, p_err, perm_err, cd_err,
                    cf ? std::to_string(*cf).c_str() : "none")};
}

// ---------------------------------------------------------------------------
// Shared shipped-config runs (used by checks 7 and 10)
// ---------------------------------------------------------------------------

struct ShippedRuns {
  bool ok = false;
  std::string error;
  fs::path dir_a;
  fs::path dir_b;
  double seconds = 0.0;
  std::string digest_a;
  std::string digest_b;
};

const ShippedRuns& shipped_runs() {
  static const ShippedRuns runs = [] {
    ShippedRuns out;
    try {
      const fs::path config_path = fs::path(DSLOSS_REPO_DIR) / "configs" / "default.json";
      const fs::path base = fs::temp_directory_path() / "dsloss_acceptance";
      fs::remove_all(base);
      out.dir_a = base / "run_a";
      out.dir_b = base / "run_b";
      const auto t0 = clock_type::now();
      WorkflowConfig a = load_config(config_path);
      a.output_dir = out.dir_a;
      const fs::path manifest_a = cmd_run(a);
      WorkflowConfig b = load_config(config_path);
      b.output_dir = out.dir_b;
      const fs::path manifest_b = cmd_run(b);
      out.seconds = seconds_since(t0);
      out.digest_a = manifest_deterministic_digest(manifest_a);
      out.digest_b = manifest_deterministic_digest(manifest_b);
      out.ok = true;
    } catch (const std::exception& e) {
      out.error = e.what();
    }
    return out;
  }();
  return runs;
}

std::vector<std::vector<std::string>> read_csv_rows(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    rows.push_back(std::move(fields));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// 7. Pareto front correctness plus trade-off shape of the shipped run
// ---------------------------------------------------------------------------

Outcome check_pareto_speedup() {
  int front_mismatches = 0;
  int idempotence_failures = 0;
  for (int set = 0; set < 1000; ++set) {
    Rng rng(12000 + static_cast<std::uint64_t>(set));
    const std::size_t n = 2 + rng.bounded(31);
    std::vector<ParetoPoint> points(n);
    for (std::size_t i = 0; i < n; ++i) {
      points[i].config = DownsampleConfig{Algorithm::Lttb, static_cast<int>(i) + 1};
      points[i].extraction_time_s = 0.1 + 9.9 * rng.uniform();
      points[i].mean_accuracy = rng.uniform();
    }

    // Quadratic scan: p is dominated when someone is at least as fast and
    // at least as accurate, strictly better in one dimension.
    std::set<std::string> expected;
    for (const auto& p : points) {
      bool dominated = false;
      for (const auto& q : points) {
        if (q.extraction_time_s <= p.extraction_time_s &&
            q.mean_accuracy >= p.mean_accuracy &&
            (q.extraction_time_s < p.extraction_time_s ||
             q.mean_accuracy > p.mean_accuracy)) {
          dominated = true;
          break;
        }
      }
      if (!dominated) expected.insert(p.label());
    }

    const auto front = pareto_front(points);
    std::set<std::string> got;
    for (const auto& p : front) got.insert(p.label());
    if (got != expected) ++front_mismatches;

    const auto again = pareto_front(front);
    std::set<std::string> twice;
    for (const auto& p : again) twice.insert(p.label());
    if (twice != got) ++idempotence_failures;
  }

  const ShippedRuns& runs = shipped_runs();
  if (!runs.ok) return {false, "shipped run failed: " + runs.error};

  bool original_dominated = false;
  for (const auto& row : read_csv_rows(runs.dir_a / "pareto.csv")) {
    if (row.size() >= 5 && row[1] == "1") original_dominated = row[4] == "1";
  }
  double min_s30 = std::numeric_limits<double>::infinity();
  for (const auto& row : read_csv_rows(runs.dir_a / "speedup.csv")) {
    if (row.size() >= 4 && row[0].find("_k30") != std::string::npos) {
      min_s30 = std::min(min_s30, std::stod(row[3]));
    }
  }

  const bool pass = front_mismatches == 0 && idempotence_failures == 0 &&
                    original_dominated && std::isfinite(min_s30) && min_s30 >= 5.0;
  return {pass, fmt("front vs quadratic reference on 1000 sets: %d mismatches, %d "
                    "idempotence failures; shipped run: Original dominated %s, "
                    "min factor-30 speedup %.1fx (>= 5)",
                    front_mismatches, idempotence_failures,
                    original_dominated ? "yes" : "NO", min_s30)};
}

// ---------------------------------------------------------------------------
// 8. Classification pipeline sanity and feature-importance collapse
// ---------------------------------------------------------------------------

FeatureDataset features_of(const LabeledDataset& segments, const DownsampleConfig* dc) {
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < segments.class_names.size(); ++i) {
    index[segments.class_names[i]] = static_cast<int>(i);
  }
  FeatureDataset fd;
  fd.class_names = segments.class_names;
  fd.feature_names = canonical_feature_names();
  fd.group_ids = segments.group_ids;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Signal sig =
        dc ? apply_downsample(segments.signals[i], *dc) : segments.signals[i];
    const auto fe = extract_features(sig);
    fd.rows.emplace_back(fe.features.values.begin(), fe.features.values.end());
    fd.extraction_time_s.push_back(fe.wall_time_s);
    fd.labels.push_back(index[segments.labels[i]]);
  }
  return fd;
}

double mean_importance(const CvSummary& cv, const std::string& feature) {
  double sum = 0.0;
  for (const auto& fold : cv.folds) sum += fold.feature_importances.at(feature);
  return sum / static_cast<double>(cv.folds.size());
}

// Bursty three-class fixture: wide Gaussian bursts are countable only at
// full rate (they collapse to 1-2 samples under factor-25 selection) while
// one-sample spikes survive extreme-preserving selection. Classes:
//   few_wide   3 wide + 21 narrow (total 24)
//   many_wide  9 wide + 15 narrow (total 24)  <- only the wide count splits
//   many_both  9 wide + 40 narrow (total 49)  <- only the total count splits
// Per-signal amplitude jitter decorrelates amplitude statistics from the
// counts, keeping the two count features uniquely informative.
Signal burst_signal(int wide, int narrow, double rate, std::uint64_t seed) {
  const std::size_t n = static_cast<std::size_t>(4.0 * rate);
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = 0.2 * rng.normal();
  const double sigma = 12.0;
  const double amp = 0.8 + 0.5 * rng.uniform();
  for (int b = 0; b < wide; ++b) {
    const double c = 4.0 * sigma + rng.uniform() * (static_cast<double>(n) - 8.0 * sigma);
    for (std::size_t i = static_cast<std::size_t>(c - 4.0 * sigma);
         i < static_cast<std::size_t>(c + 4.0 * sigma) && i < n; ++i) {
      const double d = (static_cast<double>(i) - c) / sigma;
      v[i] += amp * std::exp(-0.5 * d * d);
    }
  }
  for (int s = 0; s < narrow; ++s) v[8 + rng.bounded(n - 16)] += amp;
  double m = 0.0, var = 0.0;
  for (const double x : v) m += x;
  m /= static_cast<double>(n);
  for (const double x : v) var += (x - m) * (x - m);
  var /= static_cast<double>(n);
  const double inv = 1.0 / std::sqrt(var);
  for (auto& x : v) x = (x - m) * inv;
  return make_signal(std::move(v), rate);
}

LabeledDataset burst_dataset(int per_class, double rate, std::uint64_t seed) {
  LabeledDataset ds;
  ds.class_names = {"few_wide", "many_wide", "many_both"};
  const int wide[3] = {3, 9, 9};
  const int narrow[3] = {21, 15, 40};
  std::uint64_t k = 0;
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < per_class; ++i) {
      ds.signals.push_back(burst_signal(wide[c], narrow[c], rate, mix_seed(seed, ++k)));
      ds.labels.push_back(ds.class_names[static_cast<std::size_t>(c)]);
      ds.group_ids.push_back(ds.signals.size() - 1);
    }
  }
  return ds;
}

Outcome check_pipeline_sanity() {
  // Separable three-class waveform dataset: phase count, width and firing
  // rate all differ, so the full-rate classifier should be near-perfect.
  std::map<std::string, MuapSpec> specs;
  MuapSpec bi;
  bi.n_phases = 2;
  bi.phase_width_s = 0.0015;
  bi.firing_rate_hz = 8.0;
  MuapSpec tri;
  tri.n_phases = 3;
  tri.phase_width_s = 0.002;
  tri.firing_rate_hz = 12.0;
  MuapSpec poly;
  poly.n_phases = 5;
  poly.phase_width_s = 0.0012;
  poly.firing_rate_hz = 18.0;
  for (auto* s : {&bi, &tri, &poly}) {
    s->noise_std = 0.05;
    s->duration_s = 2.0;
  }
  specs["biphasic"] = bi;
  specs["triphasic"] = tri;
  specs["polyphasic"] = poly;

  const LabeledDataset ds = synth_dataset(specs, 6, 8000.0, 1234);
  const LabeledDataset segments = segment_dataset(ds, 1.0);
  const FeatureDataset fd = features_of(segments, nullptr);
  const double accuracy = cross_validate(fd, 5, 99).mean_accuracy;

  // Destroying the labels must push accuracy to chance. Group provenance
  // is meaningless for shuffled labels, so fold grouping is dropped.
  FeatureDataset shuffled = fd;
  shuffled.group_ids.clear();
  Rng shuffle_rng(55);
  shuffle_rng.shuffle(shuffled.labels);
  const double chance = cross_validate(shuffled, 5, 99).mean_accuracy;

  // Count-feature collapse on the burst fixture: the wide-burst counter
  // (smoothing window 5) must lose its importance after factor-25
  // downsampling while the spike counter (window 1) keeps its own.
  const LabeledDataset bursts = burst_dataset(20, 2000.0, 101);
  const CvSummary before = cross_validate(features_of(bursts, nullptr), 5, 99);
  const DownsampleConfig mm25{Algorithm::MinMax, 25};
  const CvSummary after = cross_validate(features_of(bursts, &mm25), 5, 99);
  const double w5_before = mean_importance(before, "smoothed_peak_count_w5");
  const double w1_before = mean_importance(before, "smoothed_peak_count_w1");
  const double w5_after = mean_importance(after, "smoothed_peak_count_w5");
  const double w1_after = mean_importance(after, "smoothed_peak_count_w1");

  const bool collapse = w5_before >= 0.04 && w5_after <= 0.02 &&
                        w5_after < 0.5 * w5_before && w1_before >= 0.02 &&
                        w1_after >= 0.05;
  const bool pass = accuracy >= 0.95 && chance >= 0.2 && chance <= 0.47 && collapse;
  return {pass, fmt("separable accuracy %.3f (>= 0.95); shuffled-label accuracy "
                    "%.3f (in [0.2, 0.47]); w5 importance %.3f -> %.3f "
                    "(collapses), w1 %.3f -> %.3f (survives >= 0.05)",
                    accuracy, chance, w5_before, w5_after, w1_before, w1_after)};
}

// ---------------------------------------------------------------------------
// 9. Embedding and clustering geometry
// ---------------------------------------------------------------------------

Outcome check_geometry() {
  int stress_violations = 0;
  for (int i = 0; i < 50; ++i) {
    Rng rng(6000 + static_cast<std::uint64_t>(i));
    const std::size_t npts = 6 + rng.bounded(10);
    const std::size_t dim = 3 + rng.bounded(4);
    std::vector<std::vector<double>> vectors(npts, std::vector<double>(dim));
    for (auto& v : vectors) {
      for (auto& x : v) x = rng.normal();
    }
    const MdsResult r = mds_embed(vectors, 2, 6000 + static_cast<std::uint64_t>(i));
    for (std::size_t j = 1; j < r.stress_history.size(); ++j) {
      if (r.stress_history[j] > r.stress_history[j - 1] + 1e-12) ++stress_violations;
    }
  }

  // Embedding 3-D data into 3-D is distance-preserving up to rigid motion.
  Rng rng3(61);
  std::vector<std::vector<double>> cloud(20, std::vector<double>(3));
  for (auto& v : cloud) {
    for (auto& x : v) x = rng3.normal();
  }
  const double fidelity = mds_embed(cloud, 3, 61).pearson_fidelity;

  // Two well-separated blobs: silhouette model selection must choose k=2.
  std::vector<std::vector<double>> blobs;
  Rng blob_rng(77);
  for (int i = 0; i < 8; ++i) {
    blobs.push_back({0.1 * blob_rng.normal(), 0.1 * blob_rng.normal()});
  }
  for (int i = 0; i < 8; ++i) {
    blobs.push_back({8.0 + 0.1 * blob_rng.normal(), 8.0 + 0.1 * blob_rng.normal()});
  }
  const ClusterResult cluster = cluster_importances(blobs, 2, 5, 77);

  const bool pass = stress_violations == 0 && fidelity > 0.999 && cluster.chosen_k == 2;
  return {pass, fmt("stress non-increasing on 50 instances (%d violations); 3-D "
                    "self-embedding fidelity %.6f (> 0.999); blob fixture chose "
                    "k=%d (expect 2)",
                    stress_violations, fidelity, cluster.chosen_k)};
}

// ---------------------------------------------------------------------------
// 10. Byte-identical reruns of the shipped configuration
// ---------------------------------------------------------------------------

Outcome check_reproducibility() {
  const ShippedRuns& runs = shipped_runs();
  if (!runs.ok) return {false, "shipped run failed: " + runs.error};
  const bool pass = !runs.digest_a.empty() && runs.digest_a == runs.digest_b &&
                    runs.seconds < 300.0;
  return {pass, fmt("deterministic digests %s (%s vs %s); two full runs took "
                    "%.0f s (limit 300 s)",
                    runs.digest_a == runs.digest_b ? "identical" : "DIFFER",
                    runs.digest_a.substr(0, 12).c_str(),
                    runs.digest_b.substr(0, 12).c_str(), runs.seconds)};
}

}  // namespace

int main() {
  const std::pair<const char*, Outcome (*)()> checks[] = {
      {"downsampler selections match exhaustive references", check_selection_equivalence},
      {"decimation passband fidelity and stopband rejection", check_decimate_spectral},
      {"distortion metrics match naive references", check_metric_equivalence},
      {"shape/rhythm distortion orderings at factor 25", check_distortion_orderings},
      {"ranking arithmetic and grid-order recovery", check_ranking},
      {"rank statistics against hand fixtures", check_statistics},
      {"Pareto front correctness and shipped trade-off", check_pareto_speedup},
      {"pipeline accuracy, chance level and importance collapse", check_pipeline_sanity},
      {"embedding stress, fidelity and cluster selection", check_geometry},
      {"byte-identical shipped-config reruns", check_reproducibility},
  };

  int failures = 0;
  int id = 0;
  for (const auto& [name, fn] : checks) {
    ++id;
    const Outcome o = guarded(fn);
    if (!o.pass) ++failures;
    std::printf("[%s] %2d. %s: %s\n", o.pass ? "PASS" : "FAIL", id, name,
                o.detail.c_str());
    std::fflush(stdout);
  }
  if (failures == 0) {
    std::printf("all 10 acceptance checks passed\n");
  } else {
    std::printf("%d acceptance check(s) FAILED\n", failures);
  }
  return failures;
}
