#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dsloss/downsample.hpp"
#include "dsloss/features.hpp"

namespace dsloss {

// Rows are samples, columns are features in a fixed shared order.
using FeatureMatrix = std::vector<std::vector<double>>;

// A feature matrix with everything the cross-validation stage needs:
// integer class labels, optional parent-recording provenance and the
// per-row feature-extraction wall times.
struct FeatureDataset {
  FeatureMatrix rows;
  std::vector<int> labels;                  // values in [0, n_classes)
  std::vector<std::string> class_names;     // index = label
  std::vector<std::string> feature_names;   // one per column
  std::vector<std::size_t> group_ids;       // empty = no provenance
  std::vector<double> extraction_time_s;    // empty = not measured

  std::size_t size() const { return rows.size(); }
};

std::vector<std::string> canonical_feature_names();

// One-way ANOVA F-score per feature column. Zero within-class variance
// with nonzero between-class variance maps to a huge finite score so such
// features sort first.
std::vector<double> anova_f(const FeatureMatrix& rows, const std::vector<int>& labels);

// Indices of the retained feature columns, sorted ascending: F-score
// strictly above the median F-score, topped up to a minimum of 4 by
// descending F-score with ties broken by feature name.
std::vector<std::size_t> select_features(const FeatureMatrix& rows,
                                         const std::vector<int>& labels,
                                         const std::vector<std::string>& names);

struct ClassRates {
  double sensitivity = 0.0;
  double specificity = 0.0;
  // False when the corresponding ratio was 0/0 and defaulted to 0.
  bool sensitivity_defined = true;
  bool specificity_defined = true;
};

// Square count matrix; rows index the true class, columns the prediction.
using Confusion = std::vector<std::vector<std::size_t>>;

std::map<int, ClassRates> per_class_rates(const Confusion& confusion);

// Everything fitted from the train split of one fold: the selected
// columns, their train-split standardization, and the standardized train
// points the k-NN vote runs against.
struct FoldModel {
  std::vector<std::size_t> selected;
  std::vector<double> feature_mean;  // per selected column
  std::vector<double> feature_std;   // per selected column; 0 freezes the column
  FeatureMatrix train_points;        // standardized selected columns
  std::vector<int> train_labels;
  int n_classes = 0;
  int k = 5;
};

FoldModel fit_fold(const FeatureMatrix& rows, const std::vector<int>& labels,
                   const std::vector<std::size_t>& train_idx,
                   const std::vector<std::string>& names, int n_classes);

// Distance-weighted k-NN vote over the fold's train points for one full
// feature row (selection and standardization applied internally).
int predict_fold(const FoldModel& model, std::span<const double> row);

// Deterministic stratified fold assignment, one fold id per sample. When
// group_ids is nonempty, whole groups are assigned so parent recordings
// never straddle a fold boundary.
std::vector<int> make_folds(const std::vector<int>& labels,
                            const std::vector<std::size_t>& group_ids, int n_folds,
                            std::uint64_t seed);

struct FoldResults {
  int fold_id = 0;
  double accuracy = 0.0;
  double f1_macro = 0.0;
  double precision_macro = 0.0;
  double recall_macro = 0.0;
  std::map<int, ClassRates> per_class;
  std::vector<std::string> selected_features;        // ascending column order
  std::map<std::string, double> feature_importances;  // every feature; unselected 0
  double extraction_time_s = 0.0;  // mean over this fold's validation rows
  Confusion confusion;
};

struct CvSummary {
  std::vector<FoldResults> folds;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
};

// Stratified k-fold evaluation: per fold, feature selection and
// z-scoring from the train split only, distance-weighted 5-NN prediction
// of the validation split, and permutation importance (5 seeded
// repetitions) measured on the validation split.
CvSummary cross_validate(const FeatureDataset& ds, int n_folds, std::uint64_t seed);

// A cross-validation summary tied to the downsampling configuration that
// produced the features.
struct ConfigEvaluation {
  DownsampleConfig config;
  bool is_original = false;  // evaluated on the untouched signals
  CvSummary cv;
};

}  // namespace dsloss
