#include "dsloss/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dsloss {

double compensated_sum(std::span<const double> v) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : v) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

double mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return compensated_sum(v) / static_cast<double>(v.size());
}

double variance(std::span<const double> v) {
  if (v.empty()) return 0.0;
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) {
    const double d = x - m;
    acc += d * d;
  }
  return acc / static_cast<double>(v.size());
}

double stddev(std::span<const double> v) { return std::sqrt(variance(v)); }

double skewness(std::span<const double> v) {
  if (v.empty()) return 0.0;
  const double m = mean(v);
  double m2 = 0.0, m3 = 0.0;
  for (double x : v) {
    const double d = x - m;
    m2 += d * d;
    m3 += d * d * d;
  }
  const double n = static_cast<double>(v.size());
  m2 /= n;
  m3 /= n;
  if (m2 <= 0.0) return 0.0;
  return m3 / std::pow(std::sqrt(m2), 3.0);
}

double kurtosis(std::span<const double> v) {
  if (v.empty()) return 0.0;
  const double m = mean(v);
  double m2 = 0.0, m4 = 0.0;
  for (double x : v) {
    const double d = x - m;
    const double d2 = d * d;
    m2 += d2;
    m4 += d2 * d2;
  }
  const double n = static_cast<double>(v.size());
  m2 /= n;
  m4 /= n;
  if (m2 <= 0.0) return 0.0;
  return m4 / (m2 * m2);
}

double rms(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc / static_cast<double>(v.size()));
}

double peak_to_peak(std::span<const double> v) {
  if (v.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

double zero_crossing_rate(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  std::size_t flips = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const int a = v[i - 1] >= 0.0 ? 1 : 0;
    const int b = v[i] >= 0.0 ? 1 : 0;
    flips += static_cast<std::size_t>(a != b);
  }
  return static_cast<double>(flips) / static_cast<double>(v.size() - 1);
}

std::vector<std::size_t> peak_indices(std::span<const double> v) {
  std::vector<std::size_t> peaks;
  const std::size_t n = v.size();
  if (n < 3) return peaks;
  std::size_t i = 1;
  while (i < n - 1) {
    if (v[i] > v[i - 1]) {
      // Walk to the end of a possible plateau.
      std::size_t j = i;
      while (j + 1 < n && v[j + 1] == v[i]) ++j;
      if (j + 1 < n && v[j + 1] < v[i]) {
        peaks.push_back(i + (j - i) / 2);
      }
      i = j + 1;
    } else {
      ++i;
    }
  }
  return peaks;
}

std::size_t count_peaks(std::span<const double> v) {
  return peak_indices(v).size();
}

double quantile(std::span<const double> v, double q) {
  if (v.empty()) return 0.0;
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  if (q <= 0.0) return s.front();
  if (q >= 1.0) return s.back();
  const double pos = q * static_cast<double>(s.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= s.size()) return s.back();
  return s[lo] + frac * (s[lo + 1] - s[lo]);
}

std::vector<double> midranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return 0.0;
  const double mx = mean(x.subspan(0, n));
  const double my = mean(y.subspan(0, n));
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return sxy / (std::sqrt(sxx) * std::sqrt(syy));
}

double spearman(std::span<const double> x, std::span<const double> y) {
  const auto rx = midranks(x);
  const auto ry = midranks(y);
  return pearson(rx, ry);
}

}  // namespace dsloss
