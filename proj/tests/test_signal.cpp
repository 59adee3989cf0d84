#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "dsloss/error.hpp"
#include "dsloss/moments.hpp"
#include "dsloss/signal.hpp"

using namespace dsloss;

TEST_CASE("biphasic wavelet peaks near +/- the requested amplitude") {
  MuapSpec spec;
  spec.n_phases = 2;
  spec.peak_amplitude = 1.0;
  spec.noise_std = 0.0;
  spec.seed = 3;
  const auto s = synth_muap_signal(spec, 10000.0);
  const double mx = *std::max_element(s.values.begin(), s.values.end());
  const double mn = *std::min_element(s.values.begin(), s.values.end());
  CHECK(mx >= 0.9);
  CHECK(mx <= 1.1);
  CHECK(mn >= -1.1);
  CHECK(mn <= -0.9);
}

TEST_CASE("firing rate of 10 Hz over one second yields at least 10 peaks") {
  MuapSpec spec;  // default: 10 Hz firing, 1 s, no noise
  const auto s = synth_muap_signal(spec, 10000.0);
  CHECK(count_peaks(s.values) >= 10);
}

TEST_CASE("synthesis is deterministic in the seed") {
  MuapSpec spec;
  spec.noise_std = 0.1;
  spec.seed = 42;
  const auto a = synth_muap_signal(spec, 8000.0);
  const auto b = synth_muap_signal(spec, 8000.0);
  CHECK(a.values == b.values);

  spec.seed = 43;
  const auto c = synth_muap_signal(spec, 8000.0);
  CHECK(a.values != c.values);
}

TEST_CASE("noise perturbs the clean wavelet train") {
  MuapSpec clean;
  MuapSpec noisy = clean;
  noisy.noise_std = 0.2;
  noisy.seed = 7;
  const auto a = synth_muap_signal(clean, 8000.0);
  const auto b = synth_muap_signal(noisy, 8000.0);
  REQUIRE(a.values.size() == b.values.size());
  double max_diff = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    max_diff = std::max(max_diff, std::abs(a.values[i] - b.values[i]));
  }
  CHECK(max_diff > 0.05);
}

TEST_CASE("synthesis rejects too-short outputs") {
  MuapSpec spec;
  spec.duration_s = 0.001;
  CHECK_THROWS_AS(synth_muap_signal(spec, 1000.0), ConfigError);  // 1 sample
}

TEST_CASE("segmentation produces full segments only") {
  Signal s;
  s.sample_rate_hz = 100.0;
  s.values.assign(950, 0.0);
  const auto segs = segment(s, 2.0);
  REQUIRE(segs.size() == 4);  // 950 / 200, remainder 150 dropped
  for (const auto& seg : segs) {
    CHECK(seg.values.size() == 200);
    CHECK(seg.sample_rate_hz == 100.0);
  }
}

TEST_CASE("segmentation fails when no full segment fits") {
  Signal s;
  s.sample_rate_hz = 100.0;
  s.values.assign(150, 0.0);
  CHECK_THROWS_AS(segment(s, 2.0), DataError);
}

TEST_CASE("segment values are consecutive slices of the parent") {
  Signal s;
  s.sample_rate_hz = 10.0;
  for (int i = 0; i < 25; ++i) s.values.push_back(static_cast<double>(i));
  const auto segs = segment(s, 1.0);
  REQUIRE(segs.size() == 2);
  CHECK(segs[0].values.front() == 0.0);
  CHECK(segs[0].values.back() == 9.0);
  CHECK(segs[1].values.front() == 10.0);
  CHECK(segs[1].values.back() == 19.0);
}

TEST_CASE("segment_dataset tags each segment with its parent signal") {
  LabeledDataset ds;
  for (int i = 0; i < 2; ++i) {
    Signal s;
    s.sample_rate_hz = 10.0;
    s.values.assign(30, static_cast<double>(i));
    ds.signals.push_back(s);
    ds.labels.push_back(i == 0 ? "a" : "b");
  }
  ds.class_names = {"a", "b"};
  const auto segs = segment_dataset(ds, 1.0);
  REQUIRE(segs.size() == 6);
  CHECK(segs.group_ids == std::vector<std::size_t>{0, 0, 0, 1, 1, 1});
  CHECK(segs.labels[0] == "a");
  CHECK(segs.labels[3] == "b");
  CHECK(segs.signals[4].values[0] == 1.0);
}

TEST_CASE("dataset validation catches mismatched labels") {
  LabeledDataset ds;
  ds.signals.emplace_back();
  ds.signals.back().values = {1.0, 2.0};
  ds.class_names = {"a"};
  CHECK_THROWS_AS(validate_dataset(ds), DataError);  // no labels
  ds.labels = {"zzz"};
  CHECK_THROWS_AS(validate_dataset(ds), DataError);  // label not a class
}

TEST_CASE("imbalance factor is the max/min class-count ratio") {
  LabeledDataset ds;
  ds.class_names = {"a", "b"};
  for (int i = 0; i < 15; ++i) {
    Signal s;
    s.values = {0.0, 1.0};
    ds.signals.push_back(s);
    ds.labels.push_back(i < 10 ? "a" : "b");
  }
  CHECK(imbalance_factor(ds) == doctest::Approx(2.0));
}

TEST_CASE("synthetic dataset layout and determinism") {
  std::map<std::string, MuapSpec> specs;
  specs["slow"] = MuapSpec{};
  specs["slow"].firing_rate_hz = 8.0;
  specs["fast"] = MuapSpec{};
  specs["fast"].firing_rate_hz = 14.0;

  const auto a = synth_dataset(specs, 3, 4000.0, 11);
  CHECK(a.size() == 6);
  CHECK(a.class_names.size() == 2);
  CHECK(std::count(a.labels.begin(), a.labels.end(), "slow") == 3);
  validate_dataset(a);

  const auto b = synth_dataset(specs, 3, 4000.0, 11);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.signals[i].values == b.signals[i].values);
  }

  // Signals within a class differ (distinct derived seeds) once noisy.
  std::map<std::string, MuapSpec> noisy = specs;
  noisy["slow"].noise_std = 0.1;
  noisy["fast"].noise_std = 0.1;
  const auto c = synth_dataset(noisy, 2, 4000.0, 11);
  CHECK(c.signals[0].values != c.signals[1].values);
}

TEST_CASE("unbalanced synthetic dataset honours per-class counts") {
  std::map<std::string, MuapSpec> specs;
  specs["big"] = MuapSpec{};
  specs["small"] = MuapSpec{};
  const std::map<std::string, int> counts = {{"big", 5}, {"small", 2}};
  const auto ds = synth_dataset(specs, counts, 4000.0, 1);
  CHECK(ds.size() == 7);
  CHECK(imbalance_factor(ds) == doctest::Approx(2.5));
}
