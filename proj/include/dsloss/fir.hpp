#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dsloss {

// Hamming-windowed sinc low-pass with unity DC gain. `order` must be
// even; the filter has order+1 taps and is linear-phase. `cutoff` is in
// cycles per sample (0, 0.5).
std::vector<double> design_lowpass_fir(std::size_t order, double cutoff);

// Zero-phase filtering: even-reflection padding of one filter order at
// each end, forward pass, backward pass, padding stripped. The effective
// magnitude response is |H|^2. Throws DataError when the input is
// shorter than order + 1.
std::vector<double> filtfilt(std::span<const double> taps, std::span<const double> x);

// Stage factors for cascaded decimation: repeatedly split off the largest
// divisor <= 13; a residual with no such divisor becomes its own stage.
std::vector<int> decimate_stages(int k);

}  // namespace dsloss
