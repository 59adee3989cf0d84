#include "dsloss/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "dsloss/error.hpp"
#include "dsloss/moments.hpp"
#include "dsloss/rng.hpp"

namespace dsloss {

namespace {

void check_pareto_points(const std::vector<ParetoPoint>& points,
                         const char* context) {
  if (points.empty()) {
    throw DataError(std::string(context) + ": no points");
  }
  for (const ParetoPoint& p : points) {
    if (!(p.extraction_time_s > 0.0) || !std::isfinite(p.extraction_time_s)) {
      throw DataError(std::string(context) + ": extraction time must be positive (" +
                      p.label() + ")");
    }
    if (!(p.mean_accuracy >= 0.0 && p.mean_accuracy <= 1.0)) {
      throw DataError(std::string(context) + ": accuracy outside [0, 1] (" +
                      p.label() + ")");
    }
  }
}

void check_vectors(const std::vector<std::vector<double>>& vectors,
                   const char* context) {
  if (vectors.empty()) {
    throw DataError(std::string(context) + ": no vectors");
  }
  const std::size_t dims = vectors.front().size();
  if (dims == 0) {
    throw DataError(std::string(context) + ": zero-dimensional vectors");
  }
  for (const auto& v : vectors) {
    if (v.size() != dims) {
      throw DataError(std::string(context) + ": vectors have unequal lengths");
    }
    for (double x : v) {
      if (!std::isfinite(x)) {
        throw DataError(std::string(context) + ": non-finite entry");
      }
    }
  }
}

bool all_vectors_identical(const std::vector<std::vector<double>>& vectors) {
  for (std::size_t i = 1; i < vectors.size(); ++i) {
    if (vectors[i] != vectors.front()) return false;
  }
  return true;
}

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Pairwise Euclidean distance matrix.
std::vector<std::vector<double>> distance_matrix(
    const std::vector<std::vector<double>>& vectors) {
  const std::size_t n = vectors.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dist = std::sqrt(squared_distance(vectors[i], vectors[j]));
      d[i][j] = dist;
      d[j][i] = dist;
    }
  }
  return d;
}

}  // namespace

// ---------------------------------------------------------------------------
// Pareto front, speedup, Jaccard
// ---------------------------------------------------------------------------

void mark_dominated(std::vector<ParetoPoint>& points) {
  check_pareto_points(points, "mark_dominated");
  const std::size_t n = points.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].extraction_time_s != points[b].extraction_time_s) {
      return points[a].extraction_time_s < points[b].extraction_time_s;
    }
    return points[a].mean_accuracy > points[b].mean_accuracy;
  });
  // Sweep in time order: a point is dominated by the best strictly-faster
  // point (accuracy at least as high) or by a strictly-more-accurate point
  // of the same time.
  double best_earlier = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    const double t = points[order[i]].extraction_time_s;
    double group_max = -std::numeric_limits<double>::infinity();
    while (j < n && points[order[j]].extraction_time_s == t) {
      group_max = std::max(group_max, points[order[j]].mean_accuracy);
      ++j;
    }
    for (std::size_t m = i; m < j; ++m) {
      const double acc = points[order[m]].mean_accuracy;
      points[order[m]].dominated = acc <= best_earlier || acc < group_max;
    }
    best_earlier = std::max(best_earlier, group_max);
    i = j;
  }
}

std::vector<ParetoPoint> pareto_front(std::vector<ParetoPoint> points) {
  mark_dominated(points);
  std::vector<ParetoPoint> front;
  for (ParetoPoint& p : points) {
    if (!p.dominated) front.push_back(std::move(p));
  }
  std::sort(front.begin(), front.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
    if (a.extraction_time_s != b.extraction_time_s) {
      return a.extraction_time_s < b.extraction_time_s;
    }
    if (a.mean_accuracy != b.mean_accuracy) return a.mean_accuracy < b.mean_accuracy;
    return a.label() < b.label();
  });
  return front;
}

SpeedupRecord speedup(double t_orig, double t_ds) {
  if (!(t_orig > 0.0) || !std::isfinite(t_orig) || !(t_ds > 0.0) ||
      !std::isfinite(t_ds)) {
    throw DataError("speedup: both times must be positive");
  }
  SpeedupRecord r;
  r.t_orig = t_orig;
  r.t_ds = t_ds;
  r.s = t_orig / t_ds;
  return r;
}

double jaccard_stability(const std::vector<std::set<std::string>>& fold_feature_sets) {
  if (fold_feature_sets.size() < 2) {
    throw DataError("jaccard_stability: need at least 2 fold feature sets");
  }
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < fold_feature_sets.size(); ++i) {
    for (std::size_t j = i + 1; j < fold_feature_sets.size(); ++j) {
      const auto& a = fold_feature_sets[i];
      const auto& b = fold_feature_sets[j];
      if (a.empty() && b.empty()) {
        sum += 1.0;
      } else {
        std::size_t inter = 0;
        for (const std::string& s : a) inter += b.count(s);
        const std::size_t uni = a.size() + b.size() - inter;
        sum += static_cast<double>(inter) / static_cast<double>(uni);
      }
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

// ---------------------------------------------------------------------------
// k-means and silhouettes
// ---------------------------------------------------------------------------

namespace {

std::vector<std::vector<double>> kmeanspp_init(
    const std::vector<std::vector<double>>& points, int k, Rng& rng) {
  const std::size_t n = points.size();
  std::vector<std::vector<double>> centroids;
  centroids.reserve(static_cast<std::size_t>(k));
  centroids.push_back(points[rng.bounded(n)]);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) {
    d2[i] = squared_distance(points[i], centroids.front());
  }
  while (centroids.size() < static_cast<std::size_t>(k)) {
    double total = 0.0;
    for (double v : d2) total += v;
    std::size_t pick;
    if (total > 0.0) {
      // Sample proportional to the squared distance to the nearest chosen
      // centroid (the k-means++ distribution).
      const double r = rng.uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > r) {
          pick = i;
          break;
        }
      }
    } else {
      // Every point coincides with an existing centroid; any choice works.
      pick = rng.bounded(n);
    }
    centroids.push_back(points[pick]);
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(points[i], centroids.back()));
    }
  }
  return centroids;
}

std::size_t nearest_centroid(const std::vector<double>& p,
                             const std::vector<std::vector<double>>& centroids) {
  std::size_t best = 0;
  double best_d = squared_distance(p, centroids[0]);
  for (std::size_t c = 1; c < centroids.size(); ++c) {
    const double d = squared_distance(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

KmeansResult lloyd(const std::vector<std::vector<double>>& points,
                   std::vector<std::vector<double>> centroids) {
  const std::size_t n = points.size();
  const std::size_t k = centroids.size();
  const std::size_t dims = points.front().size();
  std::vector<int> assignment(n, -1);
  std::vector<double> history;
  for (int iter = 0; iter < 300; ++iter) {
    bool changed = false;
    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const int c = static_cast<int>(nearest_centroid(points[i], centroids));
      objective += squared_distance(points[i], centroids[static_cast<std::size_t>(c)]);
      if (c != assignment[i]) {
        assignment[i] = c;
        changed = true;
      }
    }
    history.push_back(objective);
    if (!changed) break;
    std::vector<std::vector<double>> sums(k, std::vector<double>(dims, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(assignment[i]);
      for (std::size_t d = 0; d < dims; ++d) sums[c][d] += points[i][d];
      ++counts[c];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        for (std::size_t d = 0; d < dims; ++d) {
          centroids[c][d] = sums[c][d] / static_cast<double>(counts[c]);
        }
      } else {
        // Re-seed an empty cluster with the point farthest from its own
        // centroid (deterministic: ties keep the lowest index).
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = squared_distance(
              points[i], centroids[static_cast<std::size_t>(assignment[i])]);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        centroids[c] = points[far];
      }
    }
  }
  KmeansResult result;
  result.assignment = std::move(assignment);
  result.centroids = std::move(centroids);
  result.inertia_history = std::move(history);
  result.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    result.inertia += squared_distance(
        points[i], result.centroids[static_cast<std::size_t>(result.assignment[i])]);
  }
  return result;
}

}  // namespace

KmeansResult kmeans(const std::vector<std::vector<double>>& points, int k,
                    std::uint64_t seed, int restarts) {
  check_vectors(points, "kmeans");
  if (k < 1) throw ConfigError("kmeans: k must be at least 1");
  if (restarts < 1) throw ConfigError("kmeans: need at least 1 restart");
  if (static_cast<std::size_t>(k) > points.size()) {
    throw DataError("kmeans: more clusters than points");
  }
  KmeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
    KmeansResult candidate = lloyd(points, kmeanspp_init(points, k, rng));
    if (candidate.inertia < best.inertia) best = std::move(candidate);
  }
  return best;
}

std::vector<double> point_silhouettes(const std::vector<std::vector<double>>& points,
                                      const std::vector<int>& assignment) {
  check_vectors(points, "point_silhouettes");
  const std::size_t n = points.size();
  if (assignment.size() != n) {
    throw DataError("point_silhouettes: assignment length mismatch");
  }
  int max_label = -1;
  for (int a : assignment) {
    if (a < 0) throw DataError("point_silhouettes: negative cluster label");
    max_label = std::max(max_label, a);
  }
  const std::size_t k = static_cast<std::size_t>(max_label) + 1;
  std::vector<std::size_t> sizes(k, 0);
  for (int a : assignment) ++sizes[static_cast<std::size_t>(a)];
  std::size_t populated = 0;
  for (std::size_t c = 0; c < k; ++c) populated += sizes[c] > 0 ? 1 : 0;
  if (populated < 2) {
    throw DataError("point_silhouettes: need at least 2 populated clusters");
  }
  const std::vector<std::vector<double>> dist = distance_matrix(points);
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto own = static_cast<std::size_t>(assignment[i]);
    if (sizes[own] == 1) continue;  // singleton clusters score 0
    std::vector<double> cluster_sums(k, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) cluster_sums[static_cast<std::size_t>(assignment[j])] += dist[i][j];
    }
    const double a = cluster_sums[own] / static_cast<double>(sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (c == own || sizes[c] == 0) continue;
      b = std::min(b, cluster_sums[c] / static_cast<double>(sizes[c]));
    }
    const double denom = std::max(a, b);
    out[i] = denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return out;
}

double mean_silhouette(const std::vector<std::vector<double>>& points,
                       const std::vector<int>& assignment) {
  const std::vector<double> s = point_silhouettes(points, assignment);
  double total = 0.0;
  for (double v : s) total += v;
  return total / static_cast<double>(s.size());
}

ClusterResult cluster_importances(const std::vector<std::vector<double>>& vectors,
                                  int k_min, int k_max, std::uint64_t seed) {
  check_vectors(vectors, "cluster_importances");
  if (k_min < 2 || k_max < k_min) {
    throw ConfigError("cluster_importances: need 2 <= k_min <= k_max");
  }
  if (vectors.size() < static_cast<std::size_t>(k_max) + 1) {
    throw DataError("cluster_importances: need more vectors than the largest k");
  }
  if (all_vectors_identical(vectors)) {
    throw DataError("cluster_importances: all vectors identical, silhouette undefined");
  }
  ClusterResult out;
  double best_sil = -std::numeric_limits<double>::infinity();
  for (int k = k_min; k <= k_max; ++k) {
    KmeansResult km = kmeans(vectors, k, mix_seed(seed, static_cast<std::uint64_t>(k)));
    const double sil = mean_silhouette(vectors, km.assignment);
    out.silhouettes[k] = sil;
    if (sil > best_sil) {
      best_sil = sil;
      out.chosen_k = k;
      out.assignment = std::move(km.assignment);
      out.centroids = std::move(km.centroids);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// SMACOF multidimensional scaling
// ---------------------------------------------------------------------------

namespace {

using Matrix = std::vector<std::vector<double>>;

double raw_stress(const Matrix& x, const Matrix& d) {
  const std::size_t n = x.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double diff = std::sqrt(squared_distance(x[i], x[j])) - d[i][j];
      s += diff * diff;
    }
  }
  return s;
}

// One Guttman transform: X <- (1/n) B(Z) Z with unit weights, where
// b_ij = -d_ij / dist_ij(Z) for i != j (0 when the embedded points
// coincide) and the diagonal makes rows sum to zero.
Matrix guttman_step(const Matrix& z, const Matrix& d) {
  const std::size_t n = z.size();
  const std::size_t dims = z.front().size();
  Matrix b(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dz = std::sqrt(squared_distance(z[i], z[j]));
      const double v = dz > 0.0 ? -d[i][j] / dz : 0.0;
      b[i][j] = v;
      b[j][i] = v;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) row += b[i][j];
    }
    b[i][i] = -row;
  }
  Matrix x(n, std::vector<double>(dims, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double w = b[i][j] / static_cast<double>(n);
      if (w == 0.0) continue;
      for (std::size_t c = 0; c < dims; ++c) x[i][c] += w * z[j][c];
    }
  }
  return x;
}

struct SmacofRun {
  Matrix embedding;
  double stress = 0.0;
  std::vector<double> history;
};

SmacofRun run_smacof(Matrix x, const Matrix& d) {
  SmacofRun run;
  double prev = raw_stress(x, d);
  run.history.push_back(prev);
  for (int iter = 0; iter < 300; ++iter) {
    x = guttman_step(x, d);
    const double cur = raw_stress(x, d);
    run.history.push_back(cur);
    if (prev <= 0.0 || (prev - cur) / prev < 1e-6) {
      prev = cur;
      break;
    }
    prev = cur;
  }
  run.embedding = std::move(x);
  run.stress = prev;
  return run;
}

// Jacobi eigendecomposition of a symmetric matrix; returns eigenvalues and
// the matrix of column eigenvectors. Cyclic sweeps over all off-diagonal
// entries until they vanish.
void jacobi_eigen(Matrix a, std::vector<double>& values, Matrix& vectors) {
  const std::size_t n = a.size();
  vectors.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) vectors[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    }
    if (off < 1e-24) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double aip = a[i][p];
          const double aiq = a[i][q];
          a[i][p] = c * aip - s * aiq;
          a[i][q] = s * aip + c * aiq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const double apj = a[p][j];
          const double aqj = a[q][j];
          a[p][j] = c * apj - s * aqj;
          a[q][j] = s * apj + c * aqj;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = vectors[i][p];
          const double viq = vectors[i][q];
          vectors[i][p] = c * vip - s * viq;
          vectors[i][q] = s * vip + c * viq;
        }
      }
    }
  }
  values.resize(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a[i][i];
}

// Classical (Torgerson) scaling start: double-center -D^2/2 and project on
// the top eigenvectors scaled by sqrt(eigenvalue).
Matrix classical_start(const Matrix& d, int dims) {
  const std::size_t n = d.size();
  Matrix b(n, std::vector<double>(n, 0.0));
  std::vector<double> row_mean(n, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      b[i][j] = -0.5 * d[i][j] * d[i][j];
      row_mean[i] += b[i][j];
    }
    row_mean[i] /= static_cast<double>(n);
    grand += row_mean[i];
  }
  grand /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      b[i][j] += grand - row_mean[i] - row_mean[j];
    }
  }
  std::vector<double> values;
  Matrix vectors;
  jacobi_eigen(std::move(b), values, vectors);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t bb) { return values[a] > values[bb]; });
  Matrix x(n, std::vector<double>(static_cast<std::size_t>(dims), 0.0));
  for (int c = 0; c < dims; ++c) {
    const std::size_t e = order[static_cast<std::size_t>(c)];
    const double scale = std::sqrt(std::max(values[e], 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      x[i][static_cast<std::size_t>(c)] = vectors[i][e] * scale;
    }
  }
  return x;
}

std::vector<double> upper_triangle(const Matrix& d) {
  std::vector<double> out;
  out.reserve(d.size() * (d.size() - 1) / 2);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) out.push_back(d[i][j]);
  }
  return out;
}

}  // namespace

MdsResult mds_embed(const std::vector<std::vector<double>>& vectors, int dims,
                    std::uint64_t seed) {
  if (dims != 2 && dims != 3) {
    throw ConfigError("mds_embed: dims must be 2 or 3");
  }
  check_vectors(vectors, "mds_embed");
  if (vectors.size() < static_cast<std::size_t>(dims) + 2) {
    throw DataError("mds_embed: need at least dims + 2 vectors");
  }
  if (all_vectors_identical(vectors)) {
    throw DataError("mds_embed: all vectors identical");
  }
  const Matrix d = distance_matrix(vectors);
  const std::size_t n = vectors.size();

  SmacofRun best = run_smacof(classical_start(d, dims), d);
  Rng rng(mix_seed(seed, 0x6d647353ULL));
  Matrix random_start(n, std::vector<double>(static_cast<std::size_t>(dims), 0.0));
  for (auto& row : random_start) {
    for (double& v : row) v = rng.normal();
  }
  SmacofRun random_run = run_smacof(std::move(random_start), d);
  if (random_run.stress < best.stress) best = std::move(random_run);

  MdsResult result;
  result.stress = best.stress;
  result.stress_history = std::move(best.history);
  result.embedding = std::move(best.embedding);
  const std::vector<double> high = upper_triangle(d);
  const std::vector<double> low = upper_triangle(distance_matrix(result.embedding));
  result.pearson_fidelity = pearson(high, low);
  result.spearman_fidelity = spearman(high, low);
  return result;
}

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

std::vector<Polyline> trajectory_export(
    const std::vector<std::vector<double>>& embedding,
    const std::vector<EmbeddedPoint>& points) {
  check_vectors(embedding, "trajectory_export");
  if (points.size() != embedding.size()) {
    throw DataError("trajectory_export: one descriptor per embedded row required");
  }
  std::map<int, std::size_t> original_rows;  // fold -> row
  std::map<std::pair<std::string, int>, std::map<int, std::size_t>> groups;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const EmbeddedPoint& p = points[i];
    if (p.is_original) {
      if (!original_rows.emplace(p.fold, i).second) {
        throw DataError("trajectory_export: duplicate Original point for fold " +
                        std::to_string(p.fold));
      }
      continue;
    }
    if (p.algorithm.empty()) {
      throw DataError("trajectory_export: point without an algorithm name");
    }
    auto& by_factor = groups[{p.algorithm, p.fold}];
    if (!by_factor.emplace(p.factor, i).second) {
      throw DataError("trajectory_export: duplicate factor " +
                      std::to_string(p.factor) + " for " + p.algorithm);
    }
  }
  std::vector<Polyline> out;
  out.reserve(groups.size());
  for (const auto& [key, by_factor] : groups) {
    if (by_factor.size() < 2) {
      throw DataError("trajectory_export: algorithm " + key.first +
                      " needs at least 2 factors");
    }
    const auto orig = original_rows.find(key.second);
    if (orig == original_rows.end()) {
      throw DataError("trajectory_export: no Original point for fold " +
                      std::to_string(key.second));
    }
    Polyline line;
    line.algorithm = key.first;
    line.fold = key.second;
    line.vertices.reserve(by_factor.size() + 1);
    line.vertices.push_back(embedding[orig->second]);
    for (const auto& [factor, row] : by_factor) {
      line.vertices.push_back(embedding[row]);
    }
    out.push_back(std::move(line));
  }
  return out;
}

}  // namespace dsloss
