#include "dsloss/signal.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "dsloss/error.hpp"
#include "dsloss/rng.hpp"

namespace dsloss {

void validate_dataset(const LabeledDataset& ds) {
  if (ds.signals.empty()) throw DataError("dataset: no signals");
  if (ds.signals.size() != ds.labels.size()) {
    throw DataError("dataset: label count does not match signal count");
  }
  const std::set<std::string> classes(ds.class_names.begin(), ds.class_names.end());
  if (classes.size() != ds.class_names.size()) {
    throw DataError("dataset: duplicate class names");
  }
  for (const auto& label : ds.labels) {
    if (classes.find(label) == classes.end()) {
      throw DataError("dataset: label '" + label + "' not in class_names");
    }
  }
  const double rate = ds.signals.front().sample_rate_hz;
  for (const auto& s : ds.signals) {
    if (s.values.empty()) throw DataError("dataset: empty signal");
    if (s.sample_rate_hz != rate) {
      throw DataError("dataset: signals have mixed sample rates");
    }
  }
  if (!ds.group_ids.empty() && ds.group_ids.size() != ds.signals.size()) {
    throw DataError("dataset: group id count does not match signal count");
  }
}

double imbalance_factor(const LabeledDataset& ds) {
  std::map<std::string, std::size_t> counts;
  for (const auto& label : ds.labels) ++counts[label];
  std::size_t lo = ds.labels.size(), hi = 0;
  for (const auto& [name, c] : counts) {
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  if (lo == 0) throw DataError("imbalance_factor: empty class");
  return static_cast<double>(hi) / static_cast<double>(lo);
}

std::vector<Signal> segment(const Signal& signal, double segment_seconds) {
  const double len_f = segment_seconds * signal.sample_rate_hz;
  if (len_f < 2.0) {
    throw DataError("segment: segment shorter than two samples");
  }
  const std::size_t seg_len = static_cast<std::size_t>(std::floor(len_f));
  const std::size_t n_segments = signal.values.size() / seg_len;
  if (n_segments == 0) {
    throw DataError("segment: signal shorter than one segment");
  }
  std::vector<Signal> out;
  out.reserve(n_segments);
  for (std::size_t i = 0; i < n_segments; ++i) {
    Signal s;
    s.sample_rate_hz = signal.sample_rate_hz;
    s.values.assign(signal.values.begin() + static_cast<std::ptrdiff_t>(i * seg_len),
                    signal.values.begin() + static_cast<std::ptrdiff_t>((i + 1) * seg_len));
    out.push_back(std::move(s));
  }
  return out;
}

LabeledDataset segment_dataset(const LabeledDataset& ds, double segment_seconds) {
  validate_dataset(ds);
  LabeledDataset out;
  out.class_names = ds.class_names;
  for (std::size_t i = 0; i < ds.signals.size(); ++i) {
    auto segments = segment(ds.signals[i], segment_seconds);
    for (auto& s : segments) {
      out.signals.push_back(std::move(s));
      out.labels.push_back(ds.labels[i]);
      out.group_ids.push_back(i);
    }
  }
  if (out.signals.empty()) throw DataError("segment_dataset: no segments produced");
  return out;
}

Signal synth_muap_signal(const MuapSpec& spec, double sample_rate_hz) {
  if (spec.n_phases < 1) throw ConfigError("synth: n_phases must be >= 1");
  if (spec.peak_amplitude <= 0.0 || spec.phase_width_s <= 0.0 ||
      spec.firing_rate_hz <= 0.0 || spec.duration_s <= 0.0 ||
      spec.noise_std < 0.0 || sample_rate_hz <= 0.0) {
    throw ConfigError("synth: spec values must be positive");
  }
  const std::size_t n = static_cast<std::size_t>(std::floor(spec.duration_s * sample_rate_hz));
  if (n < 64) throw ConfigError("synth: duration yields fewer than 64 samples");

  // Sample one wavelet on the output grid. Lobe j sits at
  // c_j = (j - (P-1)/2) * phase_width_s with sign (-1)^j.
  const double sigma = spec.phase_width_s / 2.0;
  const double half_extent =
      (static_cast<double>(spec.n_phases - 1) / 2.0) * spec.phase_width_s + 5.0 * sigma;
  const std::ptrdiff_t half_samples =
      static_cast<std::ptrdiff_t>(std::ceil(half_extent * sample_rate_hz));
  std::vector<double> wavelet(static_cast<std::size_t>(2 * half_samples + 1), 0.0);
  double peak = 0.0;
  for (std::ptrdiff_t i = -half_samples; i <= half_samples; ++i) {
    const double t = static_cast<double>(i) / sample_rate_hz;
    double v = 0.0;
    for (int j = 0; j < spec.n_phases; ++j) {
      const double c = (static_cast<double>(j) -
                        static_cast<double>(spec.n_phases - 1) / 2.0) *
                       spec.phase_width_s;
      const double u = (t - c) / sigma;
      const double lobe = std::exp(-0.5 * u * u);
      v += (j % 2 == 0) ? lobe : -lobe;
    }
    wavelet[static_cast<std::size_t>(i + half_samples)] = v;
    peak = std::max(peak, std::abs(v));
  }
  if (peak > 0.0) {
    for (double& v : wavelet) v *= spec.peak_amplitude / peak;
  }

  Signal out;
  out.sample_rate_hz = sample_rate_hz;
  out.values.assign(n, 0.0);

  // Regular firing train, first firing half a period in.
  const double period = 1.0 / spec.firing_rate_hz;
  for (double t0 = 0.5 * period; t0 < spec.duration_s; t0 += period) {
    const std::ptrdiff_t centre = static_cast<std::ptrdiff_t>(std::llround(t0 * sample_rate_hz));
    for (std::ptrdiff_t i = -half_samples; i <= half_samples; ++i) {
      const std::ptrdiff_t idx = centre + i;
      if (idx < 0 || idx >= static_cast<std::ptrdiff_t>(n)) continue;
      out.values[static_cast<std::size_t>(idx)] +=
          wavelet[static_cast<std::size_t>(i + half_samples)];
    }
  }

  if (spec.noise_std > 0.0) {
    Rng rng(spec.seed);
    for (double& v : out.values) v += spec.noise_std * rng.normal();
  }
  return out;
}

LabeledDataset synth_dataset(const std::map<std::string, MuapSpec>& class_specs,
                             const std::map<std::string, int>& n_per_class,
                             double sample_rate_hz, std::uint64_t seed) {
  if (class_specs.empty()) throw ConfigError("synth_dataset: no classes");
  LabeledDataset ds;
  std::size_t class_idx = 0;
  for (const auto& [name, tmpl] : class_specs) {
    auto it = n_per_class.find(name);
    const int count = it == n_per_class.end() ? 0 : it->second;
    if (count < 1) throw ConfigError("synth_dataset: class '" + name + "' needs a count >= 1");
    ds.class_names.push_back(name);
    for (int i = 0; i < count; ++i) {
      MuapSpec spec = tmpl;
      spec.seed = mix_seed(seed, class_idx * 1000003ULL + static_cast<std::uint64_t>(i));
      ds.signals.push_back(synth_muap_signal(spec, sample_rate_hz));
      ds.labels.push_back(name);
    }
    ++class_idx;
  }
  validate_dataset(ds);
  return ds;
}

LabeledDataset synth_dataset(const std::map<std::string, MuapSpec>& class_specs,
                             int n_per_class, double sample_rate_hz,
                             std::uint64_t seed) {
  std::map<std::string, int> counts;
  for (const auto& [name, tmpl] : class_specs) counts[name] = n_per_class;
  return synth_dataset(class_specs, counts, sample_rate_hz, seed);
}

}  // namespace dsloss
