#include "dsloss/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "dsloss/error.hpp"
#include "dsloss/moments.hpp"
#include "dsloss/rng.hpp"

namespace dsloss {

namespace {

void check_matrix(const FeatureMatrix& rows, const std::vector<int>& labels) {
  if (rows.empty()) throw DataError("classify: empty feature matrix");
  if (rows.size() != labels.size()) {
    throw DataError("classify: row and label counts differ");
  }
  const std::size_t width = rows.front().size();
  if (width == 0) throw DataError("classify: zero-width feature matrix");
  for (const auto& r : rows) {
    if (r.size() != width) throw DataError("classify: ragged feature matrix");
  }
}

int count_classes(const std::vector<int>& labels) {
  int top = -1;
  for (const int l : labels) {
    if (l < 0) throw DataError("classify: negative class label");
    top = std::max(top, l);
  }
  return top + 1;
}

double ratio_or_zero(double num, double den, bool& defined) {
  if (den == 0.0) {
    defined = false;
    return 0.0;
  }
  return num / den;
}

}  // namespace

std::vector<std::string> canonical_feature_names() {
  std::vector<std::string> names;
  names.reserve(FeatureVector::kCount);
  for (const auto n : FeatureVector::names()) names.emplace_back(n);
  return names;
}

std::vector<double> anova_f(const FeatureMatrix& rows, const std::vector<int>& labels) {
  check_matrix(rows, labels);
  const int n_classes = count_classes(labels);
  std::vector<std::size_t> class_count(static_cast<std::size_t>(n_classes), 0);
  for (const int l : labels) ++class_count[static_cast<std::size_t>(l)];
  std::size_t present = 0;
  for (const std::size_t c : class_count) present += c > 0 ? 1 : 0;
  if (present < 2) throw DataError("anova_f: need at least two classes present");

  const std::size_t n = rows.size();
  const std::size_t width = rows.front().size();
  const double df_between = static_cast<double>(present - 1);
  const double df_within = static_cast<double>(n - present);

  std::vector<double> scores(width, 0.0);
  std::vector<double> group_sum(static_cast<std::size_t>(n_classes));
  for (std::size_t j = 0; j < width; ++j) {
    std::fill(group_sum.begin(), group_sum.end(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      group_sum[static_cast<std::size_t>(labels[i])] += rows[i][j];
      total += rows[i][j];
    }
    const double grand_mean = total / static_cast<double>(n);

    double ss_between = 0.0;
    for (int c = 0; c < n_classes; ++c) {
      const std::size_t nc = class_count[static_cast<std::size_t>(c)];
      if (nc == 0) continue;
      const double gm = group_sum[static_cast<std::size_t>(c)] / static_cast<double>(nc);
      ss_between += static_cast<double>(nc) * (gm - grand_mean) * (gm - grand_mean);
    }
    double ss_within = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double gm = group_sum[static_cast<std::size_t>(labels[i])] /
                        static_cast<double>(class_count[static_cast<std::size_t>(labels[i])]);
      const double d = rows[i][j] - gm;
      ss_within += d * d;
    }

    if (ss_within == 0.0 || df_within == 0.0) {
      // Perfectly separated (or saturated) feature: rank it above any
      // finite score; a feature that is constant everywhere scores 0.
      scores[j] = ss_between > 0.0 ? 1e300 : 0.0;
    } else {
      scores[j] = (ss_between / df_between) / (ss_within / df_within);
    }
  }
  return scores;
}

std::vector<std::size_t> select_features(const FeatureMatrix& rows,
                                         const std::vector<int>& labels,
                                         const std::vector<std::string>& names) {
  const auto scores = anova_f(rows, labels);
  if (names.size() != scores.size()) {
    throw DataError("select_features: name list does not match matrix width");
  }

  std::vector<double> sorted_scores = scores;
  std::sort(sorted_scores.begin(), sorted_scores.end());
  const std::size_t m = sorted_scores.size();
  const double median = m % 2 == 1
                            ? sorted_scores[m / 2]
                            : 0.5 * (sorted_scores[m / 2 - 1] + sorted_scores[m / 2]);

  std::vector<std::size_t> selected;
  for (std::size_t j = 0; j < m; ++j) {
    if (scores[j] > median) selected.push_back(j);
  }

  const std::size_t minimum = std::min<std::size_t>(4, m);
  if (selected.size() < minimum) {
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (scores[a] != scores[b]) return scores[a] > scores[b];
      return names[a] < names[b];
    });
    selected.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(minimum));
    std::sort(selected.begin(), selected.end());
  }
  return selected;
}

std::map<int, ClassRates> per_class_rates(const Confusion& confusion) {
  const std::size_t k = confusion.size();
  if (k == 0) throw DataError("per_class_rates: empty confusion matrix");
  for (const auto& row : confusion) {
    if (row.size() != k) throw DataError("per_class_rates: matrix is not square");
  }
  double total = 0.0;
  for (const auto& row : confusion) {
    for (const auto c : row) total += static_cast<double>(c);
  }

  std::map<int, ClassRates> rates;
  for (std::size_t c = 0; c < k; ++c) {
    double tp = static_cast<double>(confusion[c][c]);
    double fn = 0.0, fp = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == c) continue;
      fn += static_cast<double>(confusion[c][j]);
      fp += static_cast<double>(confusion[j][c]);
    }
    const double tn = total - tp - fn - fp;
    ClassRates r;
    r.sensitivity = ratio_or_zero(tp, tp + fn, r.sensitivity_defined);
    r.specificity = ratio_or_zero(tn, tn + fp, r.specificity_defined);
    rates[static_cast<int>(c)] = r;
  }
  return rates;
}

FoldModel fit_fold(const FeatureMatrix& rows, const std::vector<int>& labels,
                   const std::vector<std::size_t>& train_idx,
                   const std::vector<std::string>& names, int n_classes) {
  check_matrix(rows, labels);
  if (train_idx.empty()) throw DataError("fit_fold: empty train split");
  FeatureMatrix train_rows;
  std::vector<int> train_labels;
  train_rows.reserve(train_idx.size());
  train_labels.reserve(train_idx.size());
  for (const std::size_t i : train_idx) {
    if (i >= rows.size()) throw DataError("fit_fold: train index out of range");
    train_rows.push_back(rows[i]);
    train_labels.push_back(labels[i]);
  }

  FoldModel model;
  model.n_classes = n_classes;
  model.selected = select_features(train_rows, train_labels, names);

  const std::size_t w = model.selected.size();
  model.feature_mean.resize(w);
  model.feature_std.resize(w);
  std::vector<double> column(train_rows.size());
  for (std::size_t s = 0; s < w; ++s) {
    for (std::size_t i = 0; i < train_rows.size(); ++i) {
      column[i] = train_rows[i][model.selected[s]];
    }
    model.feature_mean[s] = mean(column);
    model.feature_std[s] = stddev(column);
  }

  model.train_points.resize(train_rows.size(), std::vector<double>(w));
  for (std::size_t i = 0; i < train_rows.size(); ++i) {
    for (std::size_t s = 0; s < w; ++s) {
      const double sd = model.feature_std[s];
      model.train_points[i][s] =
          sd == 0.0 ? 0.0 : (train_rows[i][model.selected[s]] - model.feature_mean[s]) / sd;
    }
  }
  model.train_labels = std::move(train_labels);
  return model;
}

int predict_fold(const FoldModel& model, std::span<const double> row) {
  const std::size_t w = model.selected.size();
  std::vector<double> z(w);
  for (std::size_t s = 0; s < w; ++s) {
    const std::size_t col = model.selected[s];
    if (col >= row.size()) throw DataError("predict_fold: row narrower than the model");
    const double sd = model.feature_std[s];
    z[s] = sd == 0.0 ? 0.0 : (row[col] - model.feature_mean[s]) / sd;
  }

  const std::size_t n = model.train_points.size();
  std::vector<std::pair<double, std::size_t>> by_distance(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d2 = 0.0;
    for (std::size_t s = 0; s < w; ++s) {
      const double d = z[s] - model.train_points[i][s];
      d2 += d * d;
    }
    by_distance[i] = {std::sqrt(d2), i};
  }
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(model.k), n);
  std::partial_sort(by_distance.begin(),
                    by_distance.begin() + static_cast<std::ptrdiff_t>(k),
                    by_distance.end());

  std::vector<double> votes(static_cast<std::size_t>(model.n_classes), 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    const double weight = 1.0 / std::max(by_distance[i].first, 1e-12);
    votes[static_cast<std::size_t>(
        model.train_labels[by_distance[i].second])] += weight;
  }
  int best = 0;
  for (int c = 1; c < model.n_classes; ++c) {
    if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(best)]) {
      best = c;
    }
  }
  return best;
}

std::vector<int> make_folds(const std::vector<int>& labels,
                            const std::vector<std::size_t>& group_ids, int n_folds,
                            std::uint64_t seed) {
  if (n_folds < 2) throw ConfigError("make_folds: need at least 2 folds");
  if (labels.empty()) throw DataError("make_folds: no samples");
  const int n_classes = count_classes(labels);
  const bool grouped = !group_ids.empty();
  if (grouped && group_ids.size() != labels.size()) {
    throw DataError("make_folds: group id count does not match label count");
  }

  std::vector<int> fold_of(labels.size(), -1);
  std::size_t offset = 0;

  if (!grouped) {
    for (int c = 0; c < n_classes; ++c) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == c) members.push_back(i);
      }
      if (members.size() < static_cast<std::size_t>(n_folds)) {
        throw DataError("make_folds: class " + std::to_string(c) +
                        " has fewer members than folds");
      }
      Rng rng(mix_seed(seed, static_cast<std::uint64_t>(c)));
      rng.shuffle(members);
      for (std::size_t i = 0; i < members.size(); ++i) {
        fold_of[members[i]] =
            static_cast<int>((i + offset) % static_cast<std::size_t>(n_folds));
      }
      offset = (offset + members.size()) % static_cast<std::size_t>(n_folds);
    }
    return fold_of;
  }

  // Group-aware path: assign whole groups round-robin inside each class so
  // parent recordings never straddle folds.
  std::map<std::size_t, int> group_label;
  std::map<std::size_t, std::vector<std::size_t>> group_members;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto [it, inserted] = group_label.try_emplace(group_ids[i], labels[i]);
    if (!inserted && it->second != labels[i]) {
      throw DataError("make_folds: group " + std::to_string(group_ids[i]) +
                      " spans multiple classes");
    }
    group_members[group_ids[i]].push_back(i);
  }
  for (int c = 0; c < n_classes; ++c) {
    std::vector<std::size_t> groups;
    for (const auto& [gid, label] : group_label) {
      if (label == c) groups.push_back(gid);
    }
    if (groups.size() < static_cast<std::size_t>(n_folds)) {
      throw DataError("make_folds: class " + std::to_string(c) +
                      " has fewer groups than folds");
    }
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(c)));
    rng.shuffle(groups);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const int fold =
          static_cast<int>((g + offset) % static_cast<std::size_t>(n_folds));
      for (const std::size_t i : group_members[groups[g]]) fold_of[i] = fold;
    }
    offset = (offset + groups.size()) % static_cast<std::size_t>(n_folds);
  }
  return fold_of;
}

CvSummary cross_validate(const FeatureDataset& ds, int n_folds, std::uint64_t seed) {
  check_matrix(ds.rows, ds.labels);
  const int n_classes =
      ds.class_names.empty() ? count_classes(ds.labels)
                             : static_cast<int>(ds.class_names.size());
  if (count_classes(ds.labels) > n_classes) {
    throw DataError("cross_validate: label outside the declared class set");
  }
  const std::vector<std::string>& names =
      ds.feature_names.empty() ? canonical_feature_names() : ds.feature_names;
  if (names.size() != ds.rows.front().size()) {
    throw DataError("cross_validate: feature name count does not match matrix width");
  }
  if (!ds.extraction_time_s.empty() && ds.extraction_time_s.size() != ds.rows.size()) {
    throw DataError("cross_validate: extraction time count does not match rows");
  }

  const auto fold_of = make_folds(ds.labels, ds.group_ids, n_folds, mix_seed(seed, 0));

  CvSummary summary;
  summary.folds.reserve(static_cast<std::size_t>(n_folds));

  for (int f = 0; f < n_folds; ++f) {
    std::vector<std::size_t> train_idx, val_idx;
    for (std::size_t i = 0; i < ds.rows.size(); ++i) {
      (fold_of[i] == f ? val_idx : train_idx).push_back(i);
    }
    if (val_idx.empty() || train_idx.empty()) {
      throw DataError("cross_validate: fold " + std::to_string(f) + " is empty");
    }

    const auto model = fit_fold(ds.rows, ds.labels, train_idx, names, n_classes);

    std::vector<int> predictions(val_idx.size());
    Confusion confusion(static_cast<std::size_t>(n_classes),
                        std::vector<std::size_t>(static_cast<std::size_t>(n_classes), 0));
    for (std::size_t v = 0; v < val_idx.size(); ++v) {
      predictions[v] = predict_fold(model, ds.rows[val_idx[v]]);
      ++confusion[static_cast<std::size_t>(ds.labels[val_idx[v]])]
                 [static_cast<std::size_t>(predictions[v])];
    }

    FoldResults fr;
    fr.fold_id = f;
    fr.confusion = confusion;
    double correct = 0.0;
    for (int c = 0; c < n_classes; ++c) {
      correct += static_cast<double>(confusion[static_cast<std::size_t>(c)]
                                              [static_cast<std::size_t>(c)]);
    }
    fr.accuracy = correct / static_cast<double>(val_idx.size());

    double precision_sum = 0.0, recall_sum = 0.0, f1_sum = 0.0;
    for (std::size_t c = 0; c < static_cast<std::size_t>(n_classes); ++c) {
      double tp = static_cast<double>(confusion[c][c]);
      double fp = 0.0, fn = 0.0;
      for (std::size_t j = 0; j < static_cast<std::size_t>(n_classes); ++j) {
        if (j == c) continue;
        fp += static_cast<double>(confusion[j][c]);
        fn += static_cast<double>(confusion[c][j]);
      }
      bool ignored = true;
      const double precision = ratio_or_zero(tp, tp + fp, ignored);
      const double recall = ratio_or_zero(tp, tp + fn, ignored);
      precision_sum += precision;
      recall_sum += recall;
      f1_sum += precision + recall == 0.0
                    ? 0.0
                    : 2.0 * precision * recall / (precision + recall);
    }
    fr.precision_macro = precision_sum / static_cast<double>(n_classes);
    fr.recall_macro = recall_sum / static_cast<double>(n_classes);
    fr.f1_macro = f1_sum / static_cast<double>(n_classes);
    fr.per_class = per_class_rates(confusion);

    for (const std::size_t s : model.selected) fr.selected_features.push_back(names[s]);

    // Permutation importance: accuracy drop when one selected feature is
    // shuffled across the validation rows, averaged over 5 repetitions.
    for (const auto& name : names) fr.feature_importances[name] = 0.0;
    for (const std::size_t col : model.selected) {
      Rng rng(mix_seed(seed, 1000 + static_cast<std::uint64_t>(f) * 64 +
                                 static_cast<std::uint64_t>(col)));
      double drop_sum = 0.0;
      const int reps = 5;
      for (int rep = 0; rep < reps; ++rep) {
        std::vector<std::size_t> perm(val_idx.size());
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        rng.shuffle(perm);
        double correct_perm = 0.0;
        std::vector<double> row;
        for (std::size_t v = 0; v < val_idx.size(); ++v) {
          row = ds.rows[val_idx[v]];
          row[col] = ds.rows[val_idx[perm[v]]][col];
          if (predict_fold(model, row) == ds.labels[val_idx[v]]) correct_perm += 1.0;
        }
        drop_sum += fr.accuracy - correct_perm / static_cast<double>(val_idx.size());
      }
      fr.feature_importances[names[col]] = std::max(drop_sum / reps, 0.0);
    }

    if (!ds.extraction_time_s.empty()) {
      double t = 0.0;
      for (const std::size_t i : val_idx) t += ds.extraction_time_s[i];
      fr.extraction_time_s = t / static_cast<double>(val_idx.size());
    }

    summary.folds.push_back(std::move(fr));
  }

  std::vector<double> accs(summary.folds.size());
  for (std::size_t i = 0; i < summary.folds.size(); ++i) {
    accs[i] = summary.folds[i].accuracy;
  }
  summary.mean_accuracy = mean(accs);
  summary.std_accuracy = stddev(accs);
  return summary;
}

}  // namespace dsloss
