#include "dsloss/fft.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace dsloss {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

using cvec = std::vector<std::complex<double>>;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Twiddle factors for a radix-2 size, cached per size.
const cvec& twiddles_for(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::unique_ptr<cvec>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    auto tw = std::make_unique<cvec>(n / 2);
    for (std::size_t i = 0; i < n / 2; ++i) {
      const double ang = -2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
      (*tw)[i] = {std::cos(ang), std::sin(ang)};
    }
    it = cache.emplace(n, std::move(tw)).first;
  }
  return *it->second;
}

void fft_pow2(cvec& a, bool inverse) {
  const std::size_t n = a.size();
  if (n < 2) return;
  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const cvec& tw = twiddles_for(n);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t step = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::complex<double> w = tw[k * step];
        if (inverse) w = std::conj(w);
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& x : a) x *= inv;
  }
}

// Precomputed pieces of a Bluestein transform for one length.
struct BluesteinPlan {
  std::size_t n = 0;
  std::size_t m = 0;       // padded power-of-two length
  cvec chirp;              // exp(-i*pi*k^2/n)
  cvec chirp_fft;          // FFT of the zero-padded conjugate chirp
};

const BluesteinPlan& bluestein_plan(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::unique_ptr<BluesteinPlan>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    auto plan = std::make_unique<BluesteinPlan>();
    plan->n = n;
    plan->m = next_pow2(2 * n - 1);
    plan->chirp.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      // k^2 mod 2n keeps the angle argument small for large k.
      const std::uint64_t k2 = (static_cast<std::uint64_t>(k) * k) %
                               (2 * static_cast<std::uint64_t>(n));
      const double ang = -kPi * static_cast<double>(k2) / static_cast<double>(n);
      plan->chirp[k] = {std::cos(ang), std::sin(ang)};
    }
    cvec b(plan->m, {0.0, 0.0});
    b[0] = std::conj(plan->chirp[0]);
    for (std::size_t k = 1; k < n; ++k) {
      b[k] = std::conj(plan->chirp[k]);
      b[plan->m - k] = std::conj(plan->chirp[k]);
    }
    fft_pow2(b, false);
    plan->chirp_fft = std::move(b);
    it = cache.emplace(n, std::move(plan)).first;
  }
  return *it->second;
}

void fft_bluestein(cvec& a, bool inverse) {
  const std::size_t n = a.size();
  const BluesteinPlan& plan = bluestein_plan(n);
  cvec tmp(plan.m, {0.0, 0.0});
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> x = inverse ? std::conj(a[k]) : a[k];
    tmp[k] = x * plan.chirp[k];
  }
  fft_pow2(tmp, false);
  for (std::size_t k = 0; k < plan.m; ++k) tmp[k] *= plan.chirp_fft[k];
  fft_pow2(tmp, true);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> y = tmp[k] * plan.chirp[k];
    a[k] = inverse ? std::conj(y) / static_cast<double>(n) : y;
  }
}

}  // namespace

void fft_inplace(cvec& data, bool inverse) {
  if (data.empty()) return;
  if (is_pow2(data.size())) {
    fft_pow2(data, inverse);
  } else {
    fft_bluestein(data, inverse);
  }
}

cvec fft_real(std::span<const double> x) {
  cvec a(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) a[i] = {x[i], 0.0};
  fft_inplace(a, false);
  return a;
}

std::vector<double> analytic_envelope(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("analytic_envelope: need >= 2 samples");
  cvec spec = fft_real(x);
  // One-sided doubling: keep DC (and Nyquist for even n), double the
  // positive frequencies, zero the negative ones.
  const std::size_t half = n / 2;
  if (n % 2 == 0) {
    for (std::size_t i = 1; i < half; ++i) spec[i] *= 2.0;
    for (std::size_t i = half + 1; i < n; ++i) spec[i] = 0.0;
  } else {
    for (std::size_t i = 1; i <= half; ++i) spec[i] *= 2.0;
    for (std::size_t i = half + 1; i < n; ++i) spec[i] = 0.0;
  }
  fft_inplace(spec, true);
  std::vector<double> env(n);
  for (std::size_t i = 0; i < n; ++i) env[i] = std::abs(spec[i]);
  return env;
}

PsdEstimate welch_psd(std::span<const double> x, double sample_rate_hz,
                      std::size_t nperseg) {
  const std::size_t n = x.size();
  if (nperseg < 2 || nperseg > n) {
    throw std::invalid_argument("welch_psd: bad segment length");
  }
  if (sample_rate_hz <= 0.0) {
    throw std::invalid_argument("welch_psd: sample rate must be positive");
  }
  // Periodic Hann window.
  std::vector<double> window(nperseg);
  double win_power = 0.0;
  for (std::size_t i = 0; i < nperseg; ++i) {
    window[i] = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(i) /
                                      static_cast<double>(nperseg)));
    win_power += window[i] * window[i];
  }
  const std::size_t hop = nperseg / 2 > 0 ? nperseg / 2 : 1;
  const std::size_t nbins = nperseg / 2 + 1;

  PsdEstimate out;
  out.freqs_hz.resize(nbins);
  for (std::size_t j = 0; j < nbins; ++j) {
    out.freqs_hz[j] = sample_rate_hz * static_cast<double>(j) /
                      static_cast<double>(nperseg);
  }
  out.power.assign(nbins, 0.0);

  std::size_t nseg = 0;
  cvec buf(nperseg);
  for (std::size_t start = 0; start + nperseg <= n; start += hop) {
    double seg_mean = 0.0;
    for (std::size_t i = 0; i < nperseg; ++i) seg_mean += x[start + i];
    seg_mean /= static_cast<double>(nperseg);
    for (std::size_t i = 0; i < nperseg; ++i) {
      buf[i] = {(x[start + i] - seg_mean) * window[i], 0.0};
    }
    fft_inplace(buf, false);
    for (std::size_t j = 0; j < nbins; ++j) {
      out.power[j] += std::norm(buf[j]);
    }
    ++nseg;
  }
  if (nseg == 0) throw std::invalid_argument("welch_psd: no full segment fits");

  const double scale = 1.0 / (sample_rate_hz * win_power * static_cast<double>(nseg));
  for (std::size_t j = 0; j < nbins; ++j) {
    double p = out.power[j] * scale;
    // One-sided spectrum: double everything except DC and (for even
    // nperseg) the Nyquist bin.
    const bool interior = j > 0 && !(nperseg % 2 == 0 && j == nbins - 1);
    if (interior) p *= 2.0;
    out.power[j] = p;
  }
  return out;
}

PsdEstimate welch_psd(std::span<const double> x, double sample_rate_hz) {
  const std::size_t nperseg = std::min<std::size_t>(256, x.size() / 2);
  return welch_psd(x, sample_rate_hz, nperseg);
}

}  // namespace dsloss
