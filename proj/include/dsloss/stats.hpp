#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace dsloss {

// Upper tail probability of the chi-square distribution with df degrees of
// freedom, computed through the regularized incomplete gamma function
// (series expansion for small arguments, continued fraction otherwise).
// df must be positive; x <= 0 yields 1.
double chi2_sf(double x, double df);

struct FriedmanResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Friedman rank test over an accuracy matrix with rows = folds and
// columns = treatments. Rows are ranked with midranks and the statistic
// carries the standard tie correction; the p-value comes from the
// chi-square upper tail with (columns - 1) degrees of freedom.
// A matrix whose rows are all constant has no rank information and
// yields statistic 0, p-value 1.
FriedmanResult friedman_test(const std::vector<std::vector<double>>& matrix);

// Mean of the within-row midranks for every column of the matrix.
// Shares the validation rules of friedman_test.
std::vector<double> column_mean_ranks(const std::vector<std::vector<double>>& matrix);

// Monte-Carlo approximation of the Friedman p-value: every row is permuted
// independently and the proportion of permuted statistics at least as large
// as the observed one is reported (with the usual +1 correction).
double friedman_permutation_p(const std::vector<std::vector<double>>& matrix,
                              int permutations, std::uint64_t seed);

// Nemenyi critical difference CD = q(K) * sqrt(K (K + 1) / (6 n)) for K
// treatments compared over n folds at alpha = 0.05. The studentized-range
// quantiles are taken from a table embedded for K in [2, 30]; other K or
// alpha values are rejected.
double nemenyi_critical_difference(int k, int n, double alpha = 0.05);

// First downsampling factor (ascending) whose mean rank differs from the
// original signal's mean rank by more than the Nemenyi critical difference,
// provided the Friedman test over {original} U factors is significant at
// alpha. Returns an empty optional when no factor separates.
// per_factor maps factor -> per-fold accuracies; original holds the
// per-fold accuracies of the untouched signal. All vectors must share the
// same fold count (>= 2).
std::optional<int> critical_factor(const std::map<int, std::vector<double>>& per_factor,
                                   const std::vector<double>& original,
                                   double alpha = 0.05);

}  // namespace dsloss
