#include <doctest.h>

#include <cmath>
#include <vector>

#include "dsloss/moments.hpp"
#include "oracle_data.hpp"

using namespace dsloss;

namespace {

std::vector<double> vec(std::span<const double> s) {
  return {s.begin(), s.end()};
}

}  // namespace

TEST_CASE("mean, variance and stddev use population normalisation") {
  const std::vector<double> v = {1.0, 2.0, 3.0, 4.0};
  CHECK(mean(v) == doctest::Approx(2.5));
  CHECK(variance(v) == doctest::Approx(1.25));
  CHECK(stddev(v) == doctest::Approx(std::sqrt(1.25)));
}

TEST_CASE("skewness and kurtosis match the scipy population definitions") {
  const auto x = vec(oracle::kX16);
  CHECK(skewness(x) == doctest::Approx(oracle::kSkewX16).epsilon(1e-12));
  CHECK(kurtosis(x) == doctest::Approx(oracle::kKurtX16).epsilon(1e-12));
}

TEST_CASE("skewness of a symmetric sample is zero") {
  const std::vector<double> v = {-2.0, -1.0, 0.0, 1.0, 2.0};
  CHECK(skewness(v) == doctest::Approx(0.0));
}

TEST_CASE("zero-variance input yields zero higher moments") {
  const std::vector<double> v(8, 3.14);
  CHECK(skewness(v) == 0.0);
  CHECK(kurtosis(v) == 0.0);
}

TEST_CASE("rms and peak_to_peak") {
  const std::vector<double> v = {3.0, -4.0};
  CHECK(rms(v) == doctest::Approx(std::sqrt(12.5)));
  CHECK(peak_to_peak(v) == doctest::Approx(7.0));
}

TEST_CASE("zero crossing rate counts sign-indicator flips per step") {
  CHECK(zero_crossing_rate(std::vector<double>{1.0, -1.0, 1.0, -1.0}) ==
        doctest::Approx(1.0));
  CHECK(zero_crossing_rate(std::vector<double>{1.0, 2.0, 3.0}) == doctest::Approx(0.0));
  // Exactly zero counts as non-negative, so 0 -> -1 is a flip but 1 -> 0 is not.
  CHECK(zero_crossing_rate(std::vector<double>{1.0, 0.0, -1.0, 0.0}) ==
        doctest::Approx(2.0 / 3.0));
}

TEST_CASE("peak detection matches scipy find_peaks including plateaus") {
  const auto x = vec(oracle::kPeakSignal);
  const auto idx = peak_indices(x);
  REQUIRE(idx.size() == oracle::kPeakIndices.size());
  for (std::size_t i = 0; i < idx.size(); ++i) CHECK(idx[i] == oracle::kPeakIndices[i]);
  CHECK(count_peaks(x) == oracle::kPeakIndices.size());
}

TEST_CASE("boundary samples are never peaks") {
  CHECK(count_peaks(std::vector<double>{5.0, 1.0, 2.0}) == 0);
  CHECK(count_peaks(std::vector<double>{1.0, 2.0, 5.0}) == 0);
  CHECK(count_peaks(std::vector<double>{1.0, 5.0, 2.0}) == 1);
}

TEST_CASE("quantile uses linear interpolation like numpy") {
  const auto x = vec(oracle::kX16);
  CHECK(quantile(x, 0.10) == doctest::Approx(oracle::kQuantileX16_10).epsilon(1e-12));
  CHECK(quantile(x, 0.25) == doctest::Approx(oracle::kQuantileX16_25).epsilon(1e-12));
  CHECK(quantile(x, 0.50) == doctest::Approx(oracle::kQuantileX16_50).epsilon(1e-12));
  CHECK(quantile(x, 0.90) == doctest::Approx(oracle::kQuantileX16_90).epsilon(1e-12));
}

TEST_CASE("midranks average tied positions") {
  const auto r = midranks(std::vector<double>{1.0, 2.0, 2.0, 3.0});
  REQUIRE(r.size() == 4);
  CHECK(r[0] == doctest::Approx(1.0));
  CHECK(r[1] == doctest::Approx(2.5));
  CHECK(r[2] == doctest::Approx(2.5));
  CHECK(r[3] == doctest::Approx(4.0));
}

TEST_CASE("pearson and spearman match scipy") {
  const auto a = vec(oracle::kPairA);
  const auto b = vec(oracle::kPairB);
  CHECK(pearson(a, b) == doctest::Approx(oracle::kPearsonAB).epsilon(1e-12));
  CHECK(spearman(a, b) == doctest::Approx(oracle::kSpearmanAB).epsilon(1e-12));
}

TEST_CASE("spearman handles ties via midranks") {
  const auto a = vec(oracle::kTiesA);
  const auto b = vec(oracle::kTiesB);
  CHECK(spearman(a, b) == doctest::Approx(oracle::kSpearmanTies).epsilon(1e-12));
}

TEST_CASE("pearson of a zero-variance input is zero by convention") {
  const std::vector<double> flat(5, 1.0);
  const std::vector<double> ramp = {1.0, 2.0, 3.0, 4.0, 5.0};
  CHECK(pearson(flat, ramp) == 0.0);
  CHECK(pearson(ramp, flat) == 0.0);
}

TEST_CASE("compensated_sum survives catastrophic cancellation") {
  const std::vector<double> v = {1e16, 1.0, -1e16};
  CHECK(compensated_sum(v) == doctest::Approx(1.0).epsilon(1e-15));
}
