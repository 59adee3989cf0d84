#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dsloss {

// A uniformly sampled series. When the signal is the product of a
// downsampler, source_indices records which samples of the parent were
// retained (strictly increasing, one entry per value). Decimated signals
// have no source_indices: their positions are the implicit uniform grid.
struct Signal {
  std::vector<double> values;
  double sample_rate_hz = 1.0;
  std::optional<std::vector<std::size_t>> source_indices;

  std::size_t size() const { return values.size(); }
  double duration_s() const {
    return static_cast<double>(values.size()) / sample_rate_hz;
  }
};

struct LabeledDataset {
  std::vector<Signal> signals;
  std::vector<std::string> labels;       // one per signal
  std::vector<std::string> class_names;  // ordered, unique
  // Parent-recording ids, populated by segmentation. Used for group-aware
  // fold assignment; empty when provenance is unknown.
  std::vector<std::size_t> group_ids;

  std::size_t size() const { return signals.size(); }
};

// Throws DataError if the dataset invariants are violated.
void validate_dataset(const LabeledDataset& ds);

// Ratio of the largest to the smallest class count.
double imbalance_factor(const LabeledDataset& ds);

// Parameters of the synthetic motor-unit-style waveform generator: a
// train of multi-phase wavelets at a fixed firing rate plus Gaussian
// noise.
struct MuapSpec {
  int n_phases = 3;
  double peak_amplitude = 1.0;
  double phase_width_s = 0.002;
  double firing_rate_hz = 10.0;
  double noise_std = 0.0;
  double duration_s = 1.0;
  std::uint64_t seed = 0;
};

// Splits a signal into consecutive non-overlapping segments of exactly
// floor(segment_seconds * rate) samples; a trailing remainder shorter
// than one segment is dropped. Throws DataError when no full segment
// fits.
std::vector<Signal> segment(const Signal& signal, double segment_seconds);

// Segments every signal of a dataset, tagging each segment with the index
// of its parent signal so fold assignment can keep siblings together.
LabeledDataset segment_dataset(const LabeledDataset& ds, double segment_seconds);

// Deterministic synthetic waveform. Each firing contributes a wavelet of
// n_phases alternating-sign Gaussian lobes:
//
//   w(t) = sum_{j=0}^{P-1} (-1)^j * exp(-(t - c_j)^2 / (2 sigma^2))
//
// with lobe centres c_j spaced phase_width_s apart and
// sigma = phase_width_s / 2, scaled so the largest sampled |value| of an
// isolated wavelet equals peak_amplitude. Adjacent lobe pairs form the
// biphasic rise/fall transitions of a multi-phase action potential.
Signal synth_muap_signal(const MuapSpec& spec, double sample_rate_hz);

// One dataset of |class_specs| * n_per_class signals; the per-signal seed
// is derived from the dataset seed, the class index and the instance
// index, so any subset regenerates identically.
LabeledDataset synth_dataset(const std::map<std::string, MuapSpec>& class_specs,
                             int n_per_class, double sample_rate_hz,
                             std::uint64_t seed);

// Same, with an explicit per-class count (unbalanced layouts).
LabeledDataset synth_dataset(const std::map<std::string, MuapSpec>& class_specs,
                             const std::map<std::string, int>& n_per_class,
                             double sample_rate_hz, std::uint64_t seed);

}  // namespace dsloss
