#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dsloss/downsample.hpp"

namespace dsloss {

// ---------------------------------------------------------------------------
// Speedup / accuracy trade-off
// ---------------------------------------------------------------------------

struct ParetoPoint {
  DownsampleConfig config;
  bool is_original = false;      // the untouched signal; config is ignored
  double extraction_time_s = 0.0;
  double mean_accuracy = 0.0;
  bool dominated = false;

  std::string label() const { return is_original ? "Original" : config.id(); }
};

// Sets the dominated flag on every point: p is dominated when some other
// point is at least as fast and at least as accurate, strictly better in
// one of the two. Times must be positive and accuracies within [0, 1].
void mark_dominated(std::vector<ParetoPoint>& points);

// The non-dominated subset, sorted by extraction time ascending (accuracy,
// then label break ties). Along the returned front accuracy is
// non-decreasing with time.
std::vector<ParetoPoint> pareto_front(std::vector<ParetoPoint> points);

struct SpeedupRecord {
  double t_orig = 0.0;
  double t_ds = 0.0;
  double s = 0.0;  // t_orig / t_ds
};

// Feature-extraction speedup of a downsampled signal over the original.
// Both times must be positive.
SpeedupRecord speedup(double t_orig, double t_ds);

// Mean pairwise Jaccard index |A n B| / |A u B| over all pairs of per-fold
// feature sets; a pair of empty sets counts as 1. Needs at least 2 sets.
double jaccard_stability(const std::vector<std::set<std::string>>& fold_feature_sets);

// ---------------------------------------------------------------------------
// Importance-vector clustering
// ---------------------------------------------------------------------------

struct KmeansResult {
  std::vector<int> assignment;                  // per point, in [0, k)
  std::vector<std::vector<double>> centroids;   // k rows
  double inertia = 0.0;                         // summed squared distances
  std::vector<double> inertia_history;          // per Lloyd iteration, non-increasing
};

// Lloyd's algorithm with k-means++ seeding, run `restarts` times with
// deterministic sub-seeds; the restart with the lowest inertia wins (ties
// keep the earliest restart).
KmeansResult kmeans(const std::vector<std::vector<double>>& points, int k,
                    std::uint64_t seed, int restarts = 10);

// Per-point silhouette coefficients of a clustering; every value lies in
// [-1, 1] and members of singleton clusters score 0. Needs at least two
// populated clusters in the assignment.
std::vector<double> point_silhouettes(const std::vector<std::vector<double>>& points,
                                      const std::vector<int>& assignment);

// Mean of point_silhouettes.
double mean_silhouette(const std::vector<std::vector<double>>& points,
                       const std::vector<int>& assignment);

struct ClusterResult {
  std::vector<int> assignment;
  int chosen_k = 0;
  std::map<int, double> silhouettes;            // candidate k -> mean silhouette
  std::vector<std::vector<double>> centroids;   // of the chosen clustering
};

// Clusters fold-averaged importance vectors with k-means (k-means++ init,
// 10 restarts, seeded) for every k in [k_min, k_max] and keeps the k with
// the highest mean silhouette (ties prefer the smaller k). Needs more
// vectors than k_max and at least two distinct vectors.
ClusterResult cluster_importances(const std::vector<std::vector<double>>& vectors,
                                  int k_min, int k_max, std::uint64_t seed);

// ---------------------------------------------------------------------------
// MDS embedding of importance vectors
// ---------------------------------------------------------------------------

struct MdsResult {
  std::vector<std::vector<double>> embedding;  // one row per input vector
  double pearson_fidelity = 0.0;   // correlation of pairwise distances
  double spearman_fidelity = 0.0;
  double stress = 0.0;             // final raw stress of the kept run
  std::vector<double> stress_history;  // per SMACOF iteration, non-increasing
};

// SMACOF multidimensional scaling of the Euclidean distance matrix of the
// input vectors into dims (2 or 3) dimensions: majorization iterations
// (max 300, relative stress tolerance 1e-6) from both a classical-scaling
// start and a seeded random start, keeping the run with the lower final
// stress. Fidelities correlate the upper-triangular input and embedded
// distances. Needs at least dims + 2 vectors, not all identical.
MdsResult mds_embed(const std::vector<std::vector<double>>& vectors, int dims,
                    std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Feature-space trajectories
// ---------------------------------------------------------------------------

// Descriptor of one embedded row: which algorithm/factor produced the
// importance vector, and the fold it belongs to (use a single fold id,
// e.g. 0, when embedding fold-averaged vectors). Original rows mark the
// untouched signal and ignore algorithm/factor.
struct EmbeddedPoint {
  std::string algorithm;
  int factor = 0;
  int fold = 0;
  bool is_original = false;
};

struct Polyline {
  std::string algorithm;
  int fold = 0;
  std::vector<std::vector<double>> vertices;  // embedded coordinates
};

// One polyline per (algorithm, fold): the fold's Original point first, then
// that algorithm's points by factor ascending. Every (algorithm, fold)
// group needs a matching Original row and at least 2 factors.
std::vector<Polyline> trajectory_export(
    const std::vector<std::vector<double>>& embedding,
    const std::vector<EmbeddedPoint>& points);

}  // namespace dsloss
