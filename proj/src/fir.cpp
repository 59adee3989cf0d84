#include "dsloss/fir.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dsloss/error.hpp"

namespace dsloss {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

double sinc(double x) {
  if (x == 0.0) return 1.0;
  return std::sin(kPi * x) / (kPi * x);
}

// Linear convolution followed by group-delay compensation, so the output
// is aligned with the input (valid for linear-phase taps of even order).
std::vector<double> filter_aligned(std::span<const double> taps,
                                   std::span<const double> x) {
  const std::size_t delay = (taps.size() - 1) / 2;
  const std::size_t n = x.size();
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    // y[i] = sum_j taps[j] * x[i + delay - j]
    double acc = 0.0;
    const std::size_t lo = i + delay >= n ? i + delay - n + 1 : 0;
    const std::size_t hi = std::min(taps.size() - 1, i + delay);
    for (std::size_t j = lo; j <= hi; ++j) {
      acc += taps[j] * x[i + delay - j];
    }
    y[i] = acc;
  }
  return y;
}

}  // namespace

std::vector<double> design_lowpass_fir(std::size_t order, double cutoff) {
  if (order % 2 != 0) throw std::invalid_argument("design_lowpass_fir: order must be even");
  if (cutoff <= 0.0 || cutoff >= 0.5) {
    throw std::invalid_argument("design_lowpass_fir: cutoff outside (0, 0.5)");
  }
  const std::size_t taps = order + 1;
  std::vector<double> h(taps);
  const double mid = static_cast<double>(order) / 2.0;
  double sum = 0.0;
  for (std::size_t m = 0; m < taps; ++m) {
    const double w = 0.54 - 0.46 * std::cos(2.0 * kPi * static_cast<double>(m) /
                                            static_cast<double>(order));
    h[m] = 2.0 * cutoff * sinc(2.0 * cutoff * (static_cast<double>(m) - mid)) * w;
    sum += h[m];
  }
  for (double& v : h) v /= sum;  // exact unity DC gain
  return h;
}

std::vector<double> filtfilt(std::span<const double> taps, std::span<const double> x) {
  const std::size_t pad = taps.size() - 1;
  if (x.size() < pad + 1) {
    throw DataError("filtfilt: signal shorter than filter order + 1");
  }
  std::vector<double> padded;
  padded.reserve(x.size() + 2 * pad);
  for (std::size_t i = 0; i < pad; ++i) padded.push_back(x[pad - i]);
  padded.insert(padded.end(), x.begin(), x.end());
  for (std::size_t i = 0; i < pad; ++i) padded.push_back(x[x.size() - 2 - i]);

  std::vector<double> y = filter_aligned(taps, padded);
  std::reverse(y.begin(), y.end());
  y = filter_aligned(taps, y);
  std::reverse(y.begin(), y.end());

  return std::vector<double>(y.begin() + static_cast<std::ptrdiff_t>(pad),
                             y.end() - static_cast<std::ptrdiff_t>(pad));
}

std::vector<int> decimate_stages(int k) {
  std::vector<int> stages;
  int rem = k;
  while (rem > 13) {
    int best = 0;
    for (int d = 13; d >= 2; --d) {
      if (rem % d == 0) {
        best = d;
        break;
      }
    }
    if (best == 0) break;  // residual has no small divisor; emit it whole
    stages.push_back(best);
    rem /= best;
  }
  if (rem > 1) stages.push_back(rem);
  std::sort(stages.rbegin(), stages.rend());
  return stages;
}

}  // namespace dsloss
