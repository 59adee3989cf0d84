#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dsloss {

// Descriptive statistics shared by the distortion metrics and the feature
// extractor. All moment-based quantities use population normalisation
// (divide by N), and kurtosis is the raw fourth standardised moment, not
// excess kurtosis.

double mean(std::span<const double> v);

// Population variance (divide by N).
double variance(std::span<const double> v);

double stddev(std::span<const double> v);

// Third standardised moment; 0 for a zero-variance input.
double skewness(std::span<const double> v);

// Fourth standardised moment (3 for a normal distribution); 0 for a
// zero-variance input.
double kurtosis(std::span<const double> v);

double rms(std::span<const double> v);

double peak_to_peak(std::span<const double> v);

// Zero crossing rate: mean absolute change of the indicator s(x) = 1 iff
// x >= 0 over consecutive samples. A sample equal to exactly zero counts
// as non-negative.
double zero_crossing_rate(std::span<const double> v);

// Count of strict local maxima. A flat run strictly higher than the
// samples on both sides counts once, at its midpoint; runs touching the
// signal boundary never count.
std::size_t count_peaks(std::span<const double> v);

// Indices of the peaks found by count_peaks (plateau midpoints).
std::vector<std::size_t> peak_indices(std::span<const double> v);

// Linear-interpolation quantile of v at q in [0, 1].
double quantile(std::span<const double> v, double q);

// Midrank-tied ranks, 1-based: equal values share the average of the
// positions they occupy in the sorted order.
std::vector<double> midranks(std::span<const double> v);

// Pearson correlation coefficient. If either input has zero variance the
// coefficient is defined as 0.
double pearson(std::span<const double> x, std::span<const double> y);

// Spearman correlation: Pearson on midranks.
double spearman(std::span<const double> x, std::span<const double> y);

// Neumaier compensated sum, so reductions agree to ~1e-12 regardless of
// evaluation order.
double compensated_sum(std::span<const double> v);

}  // namespace dsloss
