#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dsloss/classify.hpp"
#include "dsloss/metrics.hpp"

namespace dsloss {

// One unordered configuration matchup: the elementwise difference of the
// two mean metric profiles, who actually won on classification accuracy,
// and by how much.
struct PairSample {
  DownsampleConfig config_a;
  DownsampleConfig config_b;
  MetricVector metric_delta;     // mean_metrics(a) − mean_metrics(b)
  int label = 0;                 // 1 = a wins, 0 = a loses
  double accuracy_delta = 0.0;   // |mean_accuracy(a) − mean_accuracy(b)|
};

struct BuildPairsResult {
  std::vector<PairSample> pairs;
  std::size_t n_ties_dropped = 0;
};

// All C(n,2) matchups between the given configurations. Summaries and
// evaluations must describe the same configuration set; exact accuracy
// ties produce no pair and are counted instead.
BuildPairsResult build_pairs(const std::vector<ConfigMetricSummary>& summaries,
                             const std::vector<ConfigEvaluation>& evaluations);

// Logistic pairwise ranker over standardized metric deltas.
struct RankerModel {
  std::array<double, MetricVector::kCount> weights{};
  double bias = 0.0;
  std::array<double, MetricVector::kCount> standardize_mean{};
  std::array<double, MetricVector::kCount> standardize_std{};  // 0 freezes a metric
  bool fit_bias = true;
};

struct TrainOptions {
  double l2 = 1e-3;
  std::uint64_t seed = 0;   // interface stability; zero initialization is used
  bool fit_bias = true;     // false also centres standardization at 0 (scale only)
  int max_iterations = 10000;
  double gradient_tolerance = 1e-8;
};

RankerModel train_ranker(const std::vector<PairSample>& pairs,
                         const TrainOptions& options);
RankerModel train_ranker(const std::vector<PairSample>& pairs, double l2,
                         std::uint64_t seed);

// Probability that the "a" side of a matchup with this metric delta wins.
double predict_probability(const RankerModel& model, const MetricVector& delta);

// Exact additive attribution of the linear score: per-metric contribution
// weight_i * standardized_delta_i; contributions sum to score − bias.
std::map<std::string, double> attribution(const RankerModel& model,
                                          const MetricVector& delta);

struct RankedConfig {
  DownsampleConfig config;
  std::size_t wins = 0;
};

// Round-robin of every configuration against every other through the
// model; sorted by descending win count, ties by (algorithm name, factor,
// preselect ratio).
std::vector<RankedConfig> rank_by_wins(const RankerModel& model,
                                       const std::vector<ConfigMetricSummary>& summaries);

// Tie-corrected Kendall tau-b between two paired score vectors.
double kendall_tau_b(std::span<const double> x, std::span<const double> y);

// Tau between two total orders of the same configuration set (best
// first); positions act as the scores.
double kendall_tau(const std::vector<DownsampleConfig>& order_a,
                   const std::vector<DownsampleConfig>& order_b);

// Exponentially weighted pairwise accuracy: sum w_k C_k / sum w_k with
// w_k = exp(−lambda * accuracy_delta_k) over (correct?, accuracy delta)
// prediction outcomes.
double weighted_accuracy(const std::vector<std::pair<int, double>>& predictions,
                         double lambda);

struct RankEvaluation {
  double kendall_tau = 0.0;
  std::map<double, double> weighted_accuracy;  // lambda → value
  double plain_accuracy = 0.0;
  std::size_t n_pairs = 0;
  std::size_t n_ties_dropped = 0;
};

// Pair-level k-fold cross-validation for the accuracy numbers plus a
// full-data fit whose win-count ranking is scored against the true
// accuracy ordering with tau-b.
RankEvaluation evaluate_ranker(const std::vector<ConfigMetricSummary>& summaries,
                               const std::vector<ConfigEvaluation>& evaluations,
                               const std::vector<double>& lambdas, int folds,
                               double l2, std::uint64_t seed);

}  // namespace dsloss
