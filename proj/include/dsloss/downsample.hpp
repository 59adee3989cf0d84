#pragma once

#include <span>
#include <string>
#include <vector>

#include "dsloss/signal.hpp"

namespace dsloss {

enum class Algorithm { Decimate, MinMax, M4, Lttb, MinMaxLttb };

Algorithm parse_algorithm(const std::string& name);
std::string algorithm_name(Algorithm a);

// One grid cell: an algorithm plus a target reduction factor. A factor k
// aims at ~N/k output points for every algorithm, so group sizes are 2k
// for MinMax and 4k for M4 while LTTB uses buckets of k.
struct DownsampleConfig {
  Algorithm algorithm = Algorithm::Lttb;
  int factor = 1;
  int preselect_ratio = 4;  // MinMaxLTTB only

  // "LTTB_k25" style identifier used in reports and file names.
  std::string id() const;
  bool operator==(const DownsampleConfig& o) const {
    return algorithm == o.algorithm && factor == o.factor &&
           (algorithm != Algorithm::MinMaxLttb || preselect_ratio == o.preselect_ratio);
  }
};

// Anti-aliased uniform decimation: per stage, a zero-phase Hamming-sinc
// FIR (order 20*stage, cutoff 1/stage of Nyquist) followed by keeping
// every stage-th sample. Factors above 13 run as a cascade of stages.
// Output length is ceil(N/k); k=1 returns the signal unchanged.
Signal decimate(const Signal& signal, int k);

// Min/max of each group of 2k consecutive samples, emitted in time order.
Signal minmax(const Signal& signal, int k);

// First, last, min and max of each group of 4k samples, de-duplicated.
Signal m4(const Signal& signal, int k);

// Largest-triangle-three-buckets to floor(N/k) points: first and last
// always kept; each interior bucket contributes the point with maximal
// triangle area against the previously selected point and the mean of
// the next bucket.
Signal lttb(const Signal& signal, int k);

// LTTB preceded by min/max pre-selection of ratio * floor(N/k) points.
// Retained indices always refer to the original signal.
Signal minmaxlttb(const Signal& signal, int k, int ratio);

// The pre-selection step of MinMaxLTTB, exposed for inspection: both
// endpoints plus per-group interior extrema, at most n_keep indices.
std::vector<std::size_t> minmax_preselect(std::span<const double> values,
                                          std::size_t n_keep);

Signal apply_downsample(const Signal& signal, const DownsampleConfig& config);

struct GridResult {
  DownsampleConfig config;
  LabeledDataset dataset;
  double wall_time_s = 0.0;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

// Applies every configuration to every signal. A failure inside one
// configuration is recorded on its GridResult; the remaining
// configurations still run. Wall time per configuration is measured
// around a single-threaded pass.
std::vector<GridResult> apply_grid(const LabeledDataset& dataset,
                                   const std::vector<DownsampleConfig>& configs);

}  // namespace dsloss
