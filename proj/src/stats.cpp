#include "dsloss/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "dsloss/error.hpp"
#include "dsloss/moments.hpp"
#include "dsloss/rng.hpp"

namespace dsloss {

namespace {

// Regularized lower incomplete gamma P(a, x) by series expansion.
// Converges quickly for x < a + 1.
double gamma_p_series(double a, double x) {
  const double log_prefix = a * std::log(x) - x - std::lgamma(a);
  double term = 1.0 / a;
  double sum = term;
  double denom = a;
  for (int i = 0; i < 500; ++i) {
    denom += 1.0;
    term *= x / denom;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(log_prefix);
}

// Regularized upper incomplete gamma Q(a, x) by modified Lentz continued
// fraction. Converges quickly for x >= a + 1.
double gamma_q_cont_fraction(double a, double x) {
  const double log_prefix = a * std::log(x) - x - std::lgamma(a);
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / (b == 0.0 ? tiny : b);
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(log_prefix);
}

void check_matrix(const std::vector<std::vector<double>>& matrix,
                  const char* context) {
  if (matrix.size() < 2) {
    throw DataError(std::string(context) + ": need at least 2 rows (folds)");
  }
  const std::size_t cols = matrix.front().size();
  if (cols < 2) {
    throw DataError(std::string(context) + ": need at least 2 columns (treatments)");
  }
  for (const auto& row : matrix) {
    if (row.size() != cols) {
      throw DataError(std::string(context) + ": rows have unequal lengths");
    }
    for (double v : row) {
      if (!std::isfinite(v)) {
        throw DataError(std::string(context) + ": non-finite entry");
      }
    }
  }
}

struct RankedMatrix {
  std::vector<double> column_rank_sums;  // per column, summed over rows
  double tie_term_sum = 0.0;             // sum over rows of sum(t^3 - t)
};

RankedMatrix rank_rows(const std::vector<std::vector<double>>& matrix) {
  const std::size_t cols = matrix.front().size();
  RankedMatrix out;
  out.column_rank_sums.assign(cols, 0.0);
  for (const auto& row : matrix) {
    const std::vector<double> ranks = midranks(row);
    for (std::size_t j = 0; j < cols; ++j) out.column_rank_sums[j] += ranks[j];
    // Tie-group sizes: sort a copy and walk runs of equal values.
    std::vector<double> sorted(row.begin(), row.end());
    std::sort(sorted.begin(), sorted.end());
    std::size_t run_start = 0;
    for (std::size_t j = 1; j <= sorted.size(); ++j) {
      if (j == sorted.size() || sorted[j] != sorted[run_start]) {
        const double t = static_cast<double>(j - run_start);
        out.tie_term_sum += t * t * t - t;
        run_start = j;
      }
    }
  }
  return out;
}

double friedman_statistic_from_ranks(const RankedMatrix& ranked, std::size_t rows,
                                     std::size_t cols) {
  const double n = static_cast<double>(rows);
  const double k = static_cast<double>(cols);
  double rank_sum_sq = 0.0;
  for (double rs : ranked.column_rank_sums) rank_sum_sq += rs * rs;
  const double uncorrected =
      12.0 / (n * k * (k + 1.0)) * rank_sum_sq - 3.0 * n * (k + 1.0);
  const double correction =
      1.0 - ranked.tie_term_sum / (n * (k * k * k - k));
  if (correction <= 0.0) {
    // Every row fully tied: no rank information at all.
    return std::numeric_limits<double>::quiet_NaN();
  }
  return uncorrected / correction;
}

}  // namespace

double chi2_sf(double x, double df) {
  if (!(df > 0.0) || !std::isfinite(df)) {
    throw ConfigError("chi2_sf: degrees of freedom must be positive");
  }
  if (!std::isfinite(x)) throw DataError("chi2_sf: non-finite statistic");
  if (x <= 0.0) return 1.0;
  const double a = 0.5 * df;
  const double half_x = 0.5 * x;
  if (half_x < a + 1.0) return 1.0 - gamma_p_series(a, half_x);
  return gamma_q_cont_fraction(a, half_x);
}

FriedmanResult friedman_test(const std::vector<std::vector<double>>& matrix) {
  check_matrix(matrix, "friedman_test");
  const std::size_t rows = matrix.size();
  const std::size_t cols = matrix.front().size();
  const RankedMatrix ranked = rank_rows(matrix);
  const double stat = friedman_statistic_from_ranks(ranked, rows, cols);
  FriedmanResult result;
  if (std::isnan(stat)) {
    result.statistic = 0.0;
    result.p_value = 1.0;
    return result;
  }
  result.statistic = stat;
  result.p_value = chi2_sf(stat, static_cast<double>(cols - 1));
  return result;
}

std::vector<double> column_mean_ranks(const std::vector<std::vector<double>>& matrix) {
  check_matrix(matrix, "column_mean_ranks");
  const RankedMatrix ranked = rank_rows(matrix);
  std::vector<double> means(ranked.column_rank_sums.size());
  for (std::size_t j = 0; j < means.size(); ++j) {
    means[j] = ranked.column_rank_sums[j] / static_cast<double>(matrix.size());
  }
  return means;
}

double friedman_permutation_p(const std::vector<std::vector<double>>& matrix,
                              int permutations, std::uint64_t seed) {
  check_matrix(matrix, "friedman_permutation_p");
  if (permutations < 1) {
    throw ConfigError("friedman_permutation_p: need at least 1 permutation");
  }
  const std::size_t rows = matrix.size();
  const std::size_t cols = matrix.front().size();
  const RankedMatrix observed_ranks = rank_rows(matrix);
  double observed = friedman_statistic_from_ranks(observed_ranks, rows, cols);
  if (std::isnan(observed)) return 1.0;

  Rng rng(mix_seed(seed, 0x9e3779b97f4a7c15ULL));
  std::vector<std::vector<double>> shuffled = matrix;
  // Count permuted statistics at least as large as the observed one; a small
  // slack keeps exact ties (the identity permutation reappearing) counted.
  const double threshold = observed - 1e-9;
  long hits = 0;
  for (int p = 0; p < permutations; ++p) {
    for (auto& row : shuffled) rng.shuffle(row);
    const RankedMatrix ranked = rank_rows(shuffled);
    const double stat = friedman_statistic_from_ranks(ranked, rows, cols);
    if (!std::isnan(stat) && stat >= threshold) ++hits;
  }
  return (static_cast<double>(hits) + 1.0) /
         (static_cast<double>(permutations) + 1.0);
}

double nemenyi_critical_difference(int k, int n, double alpha) {
  // Studentized-range quantiles q_0.05(K) / sqrt(2) for infinite degrees of
  // freedom, K = 2..30 — the constants of the Nemenyi test (Demsar 2006,
  // "Statistical Comparisons of Classifiers over Multiple Data Sets",
  // Table 5 carries the same values to 3 decimals).
  static constexpr std::array<double, 29> kQ05 = {
      1.9599639845400534, 2.3437005863784091, 2.5690317725464822,
      2.7277743708703763, 2.8497054196100016, 2.9483200175296744,
      3.0308784496144132, 3.1017303413033805, 3.1636835770533729,
      3.2186536073291525, 3.2680039244661421, 3.31273859335082,
      3.3536177518523043, 3.3912302837652568, 3.4260413793706097,
      3.4584247073473247, 3.4886847993791976, 3.5170730086918112,
      3.5437991315177815, 3.5690400299507057, 3.5929461369847888,
      3.6156464372267112, 3.6372523316885754, 3.6578606730719927,
      3.6775561758530779, 3.6964133491850126, 3.7144980613753007,
      3.7318688168865739, 3.7485778068309838};
  if (alpha != 0.05) {
    throw ConfigError("nemenyi_critical_difference: only alpha = 0.05 is tabulated");
  }
  if (k < 2 || k > 30) {
    throw ConfigError("nemenyi_critical_difference: K outside tabulated range [2, 30]");
  }
  if (n < 1) {
    throw ConfigError("nemenyi_critical_difference: need at least 1 fold");
  }
  const double kd = static_cast<double>(k);
  return kQ05[static_cast<std::size_t>(k - 2)] *
         std::sqrt(kd * (kd + 1.0) / (6.0 * static_cast<double>(n)));
}

std::optional<int> critical_factor(const std::map<int, std::vector<double>>& per_factor,
                                   const std::vector<double>& original,
                                   double alpha) {
  if (per_factor.empty()) {
    throw DataError("critical_factor: no factors supplied");
  }
  const std::size_t folds = original.size();
  if (folds < 2) {
    throw DataError("critical_factor: need at least 2 folds");
  }
  for (const auto& [factor, accs] : per_factor) {
    if (accs.size() != folds) {
      throw DataError("critical_factor: factor " + std::to_string(factor) +
                      " has a mismatched fold count");
    }
  }
  // Column 0 is the original signal; factor columns follow in ascending
  // order (std::map iteration order).
  std::vector<std::vector<double>> matrix(folds);
  for (std::size_t i = 0; i < folds; ++i) {
    matrix[i].reserve(per_factor.size() + 1);
    matrix[i].push_back(original[i]);
    for (const auto& [factor, accs] : per_factor) matrix[i].push_back(accs[i]);
  }
  const FriedmanResult fr = friedman_test(matrix);
  if (!(fr.p_value < alpha)) return std::nullopt;
  const double cd = nemenyi_critical_difference(
      static_cast<int>(per_factor.size()) + 1, static_cast<int>(folds));
  const std::vector<double> mean_ranks = column_mean_ranks(matrix);
  std::size_t col = 1;
  for (const auto& [factor, accs] : per_factor) {
    if (std::abs(mean_ranks[0] - mean_ranks[col]) > cd) return factor;
    ++col;
  }
  return std::nullopt;
}

}  // namespace dsloss
