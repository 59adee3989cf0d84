#include "dsloss/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dsloss/error.hpp"
#include "dsloss/rng.hpp"

namespace dsloss {

namespace {

double sigmoid(double t) {
  if (t >= 0.0) {
    return 1.0 / (1.0 + std::exp(-t));
  }
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// log(1 + exp(-m)) without overflow, the per-pair logistic loss at margin m.
double log1p_exp_neg(double m) {
  if (m > 0.0) return std::log1p(std::exp(-m));
  return -m + std::log1p(std::exp(m));
}

std::array<double, MetricVector::kCount> standardized(const RankerModel& model,
                                                      const MetricVector& delta) {
  const auto raw = delta.to_array();
  std::array<double, MetricVector::kCount> z{};
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double sd = model.standardize_std[i];
    z[i] = sd == 0.0 ? 0.0 : (raw[i] - model.standardize_mean[i]) / sd;
  }
  return z;
}

double score(const RankerModel& model, const MetricVector& delta) {
  const auto z = standardized(model, delta);
  double t = model.bias;
  for (std::size_t i = 0; i < z.size(); ++i) t += model.weights[i] * z[i];
  return t;
}

bool config_order(const DownsampleConfig& a, const DownsampleConfig& b) {
  const auto na = algorithm_name(a.algorithm);
  const auto nb = algorithm_name(b.algorithm);
  if (na != nb) return na < nb;
  if (a.factor != b.factor) return a.factor < b.factor;
  return a.preselect_ratio < b.preselect_ratio;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

BuildPairsResult build_pairs(const std::vector<ConfigMetricSummary>& summaries,
                             const std::vector<ConfigEvaluation>& evaluations) {
  if (summaries.size() < 2) {
    throw DataError("build_pairs: need at least two configurations");
  }
  if (summaries.size() != evaluations.size()) {
    throw DataError("build_pairs: summary and evaluation counts differ");
  }
  std::map<std::string, const ConfigEvaluation*> eval_of;
  for (const auto& e : evaluations) {
    if (!eval_of.emplace(e.config.id(), &e).second) {
      throw DataError("build_pairs: duplicate evaluation for " + e.config.id());
    }
  }
  for (const auto& s : summaries) {
    if (eval_of.find(s.config.id()) == eval_of.end()) {
      throw DataError("build_pairs: no evaluation for " + s.config.id());
    }
  }

  BuildPairsResult out;
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    for (std::size_t j = i + 1; j < summaries.size(); ++j) {
      // Canonical orientation independent of the input order: sort the two
      // sides by id, then flip on a deterministic hash so labels stay
      // balanced even when the input arrives sorted by quality.
      const ConfigMetricSummary* sa = &summaries[i];
      const ConfigMetricSummary* sb = &summaries[j];
      if (sb->config.id() < sa->config.id()) std::swap(sa, sb);
      if ((fnv1a(sa->config.id() + "|" + sb->config.id()) & 1) == 1) {
        std::swap(sa, sb);
      }
      const double acc_a = eval_of.at(sa->config.id())->cv.mean_accuracy;
      const double acc_b = eval_of.at(sb->config.id())->cv.mean_accuracy;
      if (acc_a == acc_b) {
        ++out.n_ties_dropped;
        continue;
      }
      PairSample p;
      p.config_a = sa->config;
      p.config_b = sb->config;
      const auto ma = sa->mean_metrics.to_array();
      const auto mb = sb->mean_metrics.to_array();
      std::array<double, MetricVector::kCount> d{};
      for (std::size_t m = 0; m < d.size(); ++m) d[m] = ma[m] - mb[m];
      p.metric_delta = MetricVector::from_array(d);
      p.label = acc_a > acc_b ? 1 : 0;
      p.accuracy_delta = std::abs(acc_a - acc_b);
      out.pairs.push_back(std::move(p));
    }
  }
  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const PairSample& a, const PairSample& b) {
              if (a.config_a.id() != b.config_a.id()) {
                return a.config_a.id() < b.config_a.id();
              }
              return a.config_b.id() < b.config_b.id();
            });
  return out;
}

RankerModel train_ranker(const std::vector<PairSample>& pairs,
                         const TrainOptions& options) {
  if (pairs.size() < 10) {
    throw DataError("train_ranker: need at least 10 pairs");
  }
  bool has_win = false, has_loss = false;
  for (const auto& p : pairs) {
    (p.label == 1 ? has_win : has_loss) = true;
  }
  if (!has_win || !has_loss) {
    throw DataError("train_ranker: both labels must be present");
  }
  if (options.l2 < 0.0) throw ConfigError("train_ranker: negative L2 penalty");

  constexpr std::size_t kDim = MetricVector::kCount;
  const std::size_t n = pairs.size();

  RankerModel model;
  model.fit_bias = options.fit_bias;
  // Scale-only standardization: shifting deltas would be absorbed by the
  // bias anyway, and keeping zero deltas at zero makes the score exactly
  // antisymmetric when the bias is suppressed.
  for (std::size_t m = 0; m < kDim; ++m) {
    double sq = 0.0;
    double mu = 0.0;
    for (const auto& p : pairs) mu += p.metric_delta.to_array()[m];
    mu /= static_cast<double>(n);
    for (const auto& p : pairs) {
      const double d = p.metric_delta.to_array()[m] - mu;
      sq += d * d;
    }
    model.standardize_mean[m] = 0.0;
    model.standardize_std[m] = std::sqrt(sq / static_cast<double>(n));
  }

  std::vector<std::array<double, kDim>> x(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = standardized(model, pairs[i].metric_delta);
    y[i] = pairs[i].label;
  }

  const auto loss_at = [&](const std::array<double, kDim>& w, double b) {
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double t = b;
      for (std::size_t m = 0; m < kDim; ++m) t += w[m] * x[i][m];
      // y in {0,1}: margin is t for wins and -t for losses.
      loss += log1p_exp_neg(y[i] == 1.0 ? t : -t);
    }
    loss /= static_cast<double>(n);
    for (const double wm : w) loss += 0.5 * options.l2 * wm * wm;
    return loss;
  };

  std::array<double, kDim> w{};
  double b = 0.0;
  double current_loss = loss_at(w, b);
  double step = 1.0;

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    std::array<double, kDim> grad{};
    double grad_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double t = b;
      for (std::size_t m = 0; m < kDim; ++m) t += w[m] * x[i][m];
      const double residual = sigmoid(t) - y[i];
      for (std::size_t m = 0; m < kDim; ++m) grad[m] += residual * x[i][m];
      grad_b += residual;
    }
    double norm2 = 0.0;
    for (std::size_t m = 0; m < kDim; ++m) {
      grad[m] = grad[m] / static_cast<double>(n) + options.l2 * w[m];
      norm2 += grad[m] * grad[m];
    }
    grad_b /= static_cast<double>(n);
    if (options.fit_bias) norm2 += grad_b * grad_b;
    if (std::sqrt(norm2) < options.gradient_tolerance) break;

    // Backtracking line search with a mild Armijo condition.
    step = std::min(step * 2.0, 1e6);
    while (true) {
      std::array<double, kDim> w_next{};
      for (std::size_t m = 0; m < kDim; ++m) w_next[m] = w[m] - step * grad[m];
      const double b_next = options.fit_bias ? b - step * grad_b : 0.0;
      const double next_loss = loss_at(w_next, b_next);
      if (next_loss <= current_loss - 1e-4 * step * norm2 || step < 1e-16) {
        w = w_next;
        b = b_next;
        current_loss = next_loss;
        break;
      }
      step *= 0.5;
    }
  }

  model.weights = w;
  model.bias = options.fit_bias ? b : 0.0;
  return model;
}

RankerModel train_ranker(const std::vector<PairSample>& pairs, double l2,
                         std::uint64_t seed) {
  TrainOptions options;
  options.l2 = l2;
  options.seed = seed;
  return train_ranker(pairs, options);
}

double predict_probability(const RankerModel& model, const MetricVector& delta) {
  return sigmoid(score(model, delta));
}

std::map<std::string, double> attribution(const RankerModel& model,
                                          const MetricVector& delta) {
  const auto z = standardized(model, delta);
  std::map<std::string, double> out;
  const auto& names = MetricVector::names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    out[std::string(names[i])] = model.weights[i] * z[i];
  }
  return out;
}

std::vector<RankedConfig> rank_by_wins(const RankerModel& model,
                                       const std::vector<ConfigMetricSummary>& summaries) {
  if (summaries.size() < 2) {
    throw DataError("rank_by_wins: need at least two configurations");
  }
  std::vector<RankedConfig> ranked(summaries.size());
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    ranked[i].config = summaries[i].config;
  }
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    for (std::size_t j = i + 1; j < summaries.size(); ++j) {
      const auto ma = summaries[i].mean_metrics.to_array();
      const auto mb = summaries[j].mean_metrics.to_array();
      std::array<double, MetricVector::kCount> d{};
      for (std::size_t m = 0; m < d.size(); ++m) d[m] = ma[m] - mb[m];
      const double p = predict_probability(model, MetricVector::from_array(d));
      if (p > 0.5) {
        ++ranked[i].wins;
      } else if (p < 0.5) {
        ++ranked[j].wins;
      }
      // An exact 0.5 is a modelled dead heat: no win either way.
    }
  }
  std::sort(ranked.begin(), ranked.end(), [](const RankedConfig& a, const RankedConfig& b) {
    if (a.wins != b.wins) return a.wins > b.wins;
    return config_order(a.config, b.config);
  });
  return ranked;
}

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DataError("kendall_tau_b: need two sequences of equal length >= 2");
  }
  const std::size_t n = x.size();
  long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0.0 && dy == 0.0) {
        ++ties_x;
        ++ties_y;
      } else if (dx == 0.0) {
        ++ties_x;
      } else if (dy == 0.0) {
        ++ties_y;
      } else if ((dx > 0.0) == (dy > 0.0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const double n0 = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const double denom = std::sqrt((n0 - static_cast<double>(ties_x)) *
                                 (n0 - static_cast<double>(ties_y)));
  if (denom == 0.0) {
    throw DataError("kendall_tau_b: a sequence is entirely tied");
  }
  return static_cast<double>(concordant - discordant) / denom;
}

double kendall_tau(const std::vector<DownsampleConfig>& order_a,
                   const std::vector<DownsampleConfig>& order_b) {
  if (order_a.size() != order_b.size() || order_a.size() < 2) {
    throw DataError("kendall_tau: need two orders of the same size >= 2");
  }
  std::map<std::string, std::size_t> pos_b;
  for (std::size_t i = 0; i < order_b.size(); ++i) {
    if (!pos_b.emplace(order_b[i].id(), i).second) {
      throw DataError("kendall_tau: duplicate configuration " + order_b[i].id());
    }
  }
  std::vector<double> ra(order_a.size()), rb(order_a.size());
  for (std::size_t i = 0; i < order_a.size(); ++i) {
    const auto it = pos_b.find(order_a[i].id());
    if (it == pos_b.end()) {
      throw DataError("kendall_tau: orders cover different configurations");
    }
    // Positions count down so that "earlier in the list" means "better".
    ra[i] = -static_cast<double>(i);
    rb[i] = -static_cast<double>(it->second);
  }
  return kendall_tau_b(ra, rb);
}

double weighted_accuracy(const std::vector<std::pair<int, double>>& predictions,
                         double lambda) {
  if (predictions.empty()) {
    throw DataError("weighted_accuracy: no predictions");
  }
  if (lambda < 0.0) throw ConfigError("weighted_accuracy: negative lambda");
  double num = 0.0, den = 0.0;
  for (const auto& [correct, delta] : predictions) {
    if (correct != 0 && correct != 1) {
      throw DataError("weighted_accuracy: correctness flag must be 0 or 1");
    }
    const double w = std::exp(-lambda * delta);
    num += w * static_cast<double>(correct);
    den += w;
  }
  return num / den;
}

RankEvaluation evaluate_ranker(const std::vector<ConfigMetricSummary>& summaries,
                               const std::vector<ConfigEvaluation>& evaluations,
                               const std::vector<double>& lambdas, int folds,
                               double l2, std::uint64_t seed) {
  if (folds < 2) throw ConfigError("evaluate_ranker: need at least 2 folds");
  auto built = build_pairs(summaries, evaluations);
  const auto& pairs = built.pairs;
  if (pairs.size() < static_cast<std::size_t>(folds)) {
    throw DataError("evaluate_ranker: fewer pairs than folds");
  }

  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(mix_seed(seed, 0));
  rng.shuffle(order);

  std::vector<std::pair<int, double>> outcomes(pairs.size());
  for (int f = 0; f < folds; ++f) {
    std::vector<PairSample> train;
    std::vector<std::size_t> held;
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (static_cast<int>(i % static_cast<std::size_t>(folds)) == f) {
        held.push_back(order[i]);
      } else {
        train.push_back(pairs[order[i]]);
      }
    }
    const auto model = train_ranker(train, l2, seed);
    for (const std::size_t idx : held) {
      const double p = predict_probability(model, pairs[idx].metric_delta);
      const int predicted = p > 0.5 ? 1 : 0;
      outcomes[idx] = {predicted == pairs[idx].label ? 1 : 0,
                       pairs[idx].accuracy_delta};
    }
  }

  RankEvaluation eval;
  eval.n_pairs = pairs.size();
  eval.n_ties_dropped = built.n_ties_dropped;
  eval.plain_accuracy = weighted_accuracy(outcomes, 0.0);
  for (const double lambda : lambdas) {
    eval.weighted_accuracy[lambda] = weighted_accuracy(outcomes, lambda);
  }

  const auto final_model = train_ranker(pairs, l2, seed);
  const auto ranked = rank_by_wins(final_model, summaries);
  std::map<std::string, double> accuracy_of;
  for (const auto& e : evaluations) accuracy_of[e.config.id()] = e.cv.mean_accuracy;
  std::vector<double> wins(ranked.size()), accs(ranked.size());
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    wins[i] = static_cast<double>(ranked[i].wins);
    accs[i] = accuracy_of.at(ranked[i].config.id());
  }
  eval.kendall_tau = kendall_tau_b(wins, accs);
  return eval;
}

}  // namespace dsloss
