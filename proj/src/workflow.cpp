#include "dsloss/workflow.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <thread>
#include <utility>

#include <json.hpp>

#include "dsloss/error.hpp"
#include "dsloss/format.hpp"
#include "dsloss/rng.hpp"
#include "dsloss/sha256.hpp"
#include "dsloss/svg.hpp"

namespace dsloss {

namespace {

using nlohmann::json;

// Seed streams: every stage derives its randomness from the config seed
// plus a fixed stream id, so stages stay independent and reruns identical.
constexpr std::uint64_t kStreamDataset = 11;
constexpr std::uint64_t kStreamFolds = 101;
constexpr std::uint64_t kStreamRankEval = 202;
constexpr std::uint64_t kStreamRankFit = 203;
constexpr std::uint64_t kStreamCluster = 301;
constexpr std::uint64_t kStreamMds = 302;

// ---------------------------------------------------------------------------
// Small utilities
// ---------------------------------------------------------------------------

int resolve_threads(const WorkflowConfig& config) {
  if (config.threads > 0) return config.threads;
  if (const char* env = std::getenv("DSLOSS_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Index-parallel loop; exceptions are re-thrown in index order so runs
// fail deterministically regardless of scheduling.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  const int workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  pool.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&]() {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) break;
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
  }
}

std::string join_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ",";
    out += csv_field(fields[i]);
  }
  out += "\n";
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw DataError("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Minimal CSV reader for our own artifacts (quoted fields supported).
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  if (!field.empty() || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("empty CSV file " + path.string());
  return rows;
}

double parse_double(const std::string& s, const std::string& context) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError(context + ": malformed number '" + s + "'");
  }
}

std::size_t column_index(const std::vector<std::string>& header,
                         const std::string& name,
                         const std::filesystem::path& path) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw DataError(path.string() + ": missing column '" + name + "'");
  }
  return static_cast<std::size_t>(it - header.begin());
}

// ---------------------------------------------------------------------------
// Config handling
// ---------------------------------------------------------------------------

void require_keys(const json& j, const std::set<std::string>& allowed,
                  const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      throw ConfigError("config: unknown key '" + key + "' in " + where);
    }
  }
}

WorkflowConfig config_from_json(const json& j) {
  WorkflowConfig c;
  require_keys(j,
               {"dataset", "algorithms", "factors", "preselect_ratio",
                "segment_seconds", "folds", "seed", "lambdas", "ranker_l2",
                "output_dir", "threads"},
               "the top level");
  if (j.contains("dataset")) {
    const json& d = j.at("dataset");
    require_keys(d, {"synth", "path", "format"}, "dataset");
    if (d.contains("synth")) {
      if (d.contains("path") || d.contains("format")) {
        throw ConfigError("config: dataset is either synth or path, not both");
      }
      c.dataset.is_synth = true;
      const json& s = d.at("synth");
      require_keys(s, {"signals_per_class", "duration_s", "sample_rate_hz", "noise_std"},
                   "dataset.synth");
      if (s.contains("signals_per_class")) {
        c.dataset.synth.signals_per_class = s.at("signals_per_class").get<int>();
      }
      if (s.contains("duration_s")) {
        c.dataset.synth.duration_s = s.at("duration_s").get<double>();
      }
      if (s.contains("sample_rate_hz")) {
        c.dataset.synth.sample_rate_hz = s.at("sample_rate_hz").get<double>();
      }
      if (s.contains("noise_std")) {
        c.dataset.synth.noise_std = s.at("noise_std").get<double>();
      }
    } else if (d.contains("path")) {
      c.dataset.is_synth = false;
      c.dataset.path = d.at("path").get<std::string>();
      if (d.contains("format")) {
        c.dataset.format = parse_format(d.at("format").get<std::string>());
      }
    } else {
      throw ConfigError("config: dataset needs either synth or path");
    }
  }
  if (j.contains("algorithms")) {
    c.algorithms.clear();
    for (const json& a : j.at("algorithms")) {
      c.algorithms.push_back(parse_algorithm(a.get<std::string>()));
    }
  }
  if (j.contains("factors")) {
    c.factors.clear();
    for (const json& f : j.at("factors")) c.factors.push_back(f.get<int>());
  }
  if (j.contains("preselect_ratio")) c.preselect_ratio = j.at("preselect_ratio").get<int>();
  if (j.contains("segment_seconds")) c.segment_seconds = j.at("segment_seconds").get<double>();
  if (j.contains("folds")) c.folds = j.at("folds").get<int>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("lambdas")) {
    c.lambdas.clear();
    for (const json& l : j.at("lambdas")) c.lambdas.push_back(l.get<double>());
  }
  if (j.contains("ranker_l2")) c.ranker_l2 = j.at("ranker_l2").get<double>();
  if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("threads")) c.threads = j.at("threads").get<int>();
  return c;
}

}  // namespace

std::vector<int> default_factors() {
  std::vector<int> f = {2};
  for (int k = 5; k <= 100; k += 5) f.push_back(k);
  f.push_back(200);
  f.push_back(300);
  f.push_back(400);
  f.push_back(500);
  f.push_back(1000);
  return f;
}

WorkflowConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

WorkflowConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_text_file(path));
}

void validate_config(WorkflowConfig& config) {
  if (config.factors.empty()) config.factors = default_factors();
  std::sort(config.factors.begin(), config.factors.end());
  config.factors.erase(std::unique(config.factors.begin(), config.factors.end()),
                       config.factors.end());
  for (int f : config.factors) {
    if (f < 1) throw ConfigError("config: factors must be >= 1");
  }
  if (config.algorithms.empty()) {
    throw ConfigError("config: need at least one algorithm");
  }
  std::set<Algorithm> seen;
  for (Algorithm a : config.algorithms) {
    if (!seen.insert(a).second) {
      throw ConfigError("config: duplicate algorithm " + algorithm_name(a));
    }
  }
  if (config.preselect_ratio < 1) {
    throw ConfigError("config: preselect_ratio must be >= 1");
  }
  if (!(config.segment_seconds > 0.0) || !std::isfinite(config.segment_seconds)) {
    throw ConfigError("config: segment_seconds must be positive");
  }
  if (config.folds < 2) throw ConfigError("config: folds must be >= 2");
  for (double l : config.lambdas) {
    if (!(l >= 0.0) || !std::isfinite(l)) {
      throw ConfigError("config: lambdas must be finite and >= 0");
    }
  }
  if (!(config.ranker_l2 >= 0.0) || !std::isfinite(config.ranker_l2)) {
    throw ConfigError("config: ranker_l2 must be finite and >= 0");
  }
  if (config.threads < 0) throw ConfigError("config: threads must be >= 0");
  if (config.dataset.is_synth) {
    const SynthSpec& s = config.dataset.synth;
    if (s.signals_per_class < 1) {
      throw ConfigError("config: synth.signals_per_class must be >= 1");
    }
    if (!(s.duration_s >= config.segment_seconds)) {
      throw ConfigError("config: synth.duration_s shorter than one segment");
    }
    if (!(s.sample_rate_hz > 0.0)) {
      throw ConfigError("config: synth.sample_rate_hz must be positive");
    }
    if (!(s.noise_std >= 0.0)) {
      throw ConfigError("config: synth.noise_std must be >= 0");
    }
  }
}

std::string config_to_json(const WorkflowConfig& config) {
  // Only result-defining fields: output_dir and threads affect where and
  // how fast, never what, so they stay out of the reproducibility record.
  json j;
  if (config.dataset.is_synth) {
    j["dataset"]["synth"] = {
        {"signals_per_class", config.dataset.synth.signals_per_class},
        {"duration_s", config.dataset.synth.duration_s},
        {"sample_rate_hz", config.dataset.synth.sample_rate_hz},
        {"noise_std", config.dataset.synth.noise_std}};
  } else {
    j["dataset"]["path"] = config.dataset.path.string();
    j["dataset"]["format"] = format_name(config.dataset.format);
  }
  json algs = json::array();
  for (Algorithm a : config.algorithms) algs.push_back(algorithm_name(a));
  j["algorithms"] = algs;
  j["factors"] = config.factors;
  j["preselect_ratio"] = config.preselect_ratio;
  j["segment_seconds"] = config.segment_seconds;
  j["folds"] = config.folds;
  j["seed"] = config.seed;
  j["lambdas"] = config.lambdas;
  j["ranker_l2"] = config.ranker_l2;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Dataset
// ---------------------------------------------------------------------------

namespace {

// Three waveform classes separated along independent axes: phase count
// (shape), phase width (bandwidth) and firing rate (rhythm).
std::map<std::string, MuapSpec> synth_class_specs(const SynthSpec& s) {
  MuapSpec biphasic;
  biphasic.n_phases = 2;
  biphasic.phase_width_s = 0.0015;
  biphasic.firing_rate_hz = 8.0;
  MuapSpec triphasic;
  triphasic.n_phases = 3;
  triphasic.phase_width_s = 0.002;
  triphasic.firing_rate_hz = 12.0;
  MuapSpec polyphasic;
  polyphasic.n_phases = 5;
  polyphasic.phase_width_s = 0.0012;
  polyphasic.firing_rate_hz = 18.0;
  std::map<std::string, MuapSpec> specs = {{"biphasic", biphasic},
                                           {"triphasic", triphasic},
                                           {"polyphasic", polyphasic}};
  for (auto& [name, spec] : specs) {
    spec.duration_s = s.duration_s;
    spec.noise_std = s.noise_std;
  }
  return specs;
}

}  // namespace

LabeledDataset build_segments(const WorkflowConfig& config) {
  LabeledDataset ds;
  if (config.dataset.is_synth) {
    ds = synth_dataset(synth_class_specs(config.dataset.synth),
                       config.dataset.synth.signals_per_class,
                       config.dataset.synth.sample_rate_hz,
                       mix_seed(config.seed, kStreamDataset));
  } else {
    ds = load_dataset(config.dataset.path, config.dataset.format);
  }
  validate_dataset(ds);
  return segment_dataset(ds, config.segment_seconds);
}

// ---------------------------------------------------------------------------
// Workflow core
// ---------------------------------------------------------------------------

namespace {

std::vector<int> labels_as_ints(const LabeledDataset& segments) {
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < segments.class_names.size(); ++i) {
    index[segments.class_names[i]] = static_cast<int>(i);
  }
  std::vector<int> out;
  out.reserve(segments.labels.size());
  for (const std::string& l : segments.labels) out.push_back(index.at(l));
  return out;
}

FeatureDataset features_of_signals(const std::vector<Signal>& signals,
                                   const LabeledDataset& segments,
                                   const std::vector<int>& int_labels) {
  FeatureDataset fd;
  fd.class_names = segments.class_names;
  fd.feature_names = canonical_feature_names();
  fd.labels = int_labels;
  fd.group_ids = segments.group_ids;
  fd.rows.reserve(signals.size());
  fd.extraction_time_s.reserve(signals.size());
  for (const Signal& s : signals) {
    const FeatureExtraction fe = extract_features(s);
    fd.rows.emplace_back(fe.features.values.begin(), fe.features.values.end());
    fd.extraction_time_s.push_back(fe.wall_time_s);
  }
  return fd;
}

double mean_fold_extraction(const CvSummary& cv) {
  if (cv.folds.empty()) return 0.0;
  double sum = 0.0;
  for (const FoldResults& f : cv.folds) sum += f.extraction_time_s;
  return sum / static_cast<double>(cv.folds.size());
}

std::vector<double> fold_accuracies(const CvSummary& cv) {
  std::vector<double> out;
  out.reserve(cv.folds.size());
  for (const FoldResults& f : cv.folds) out.push_back(f.accuracy);
  return out;
}

// Fold-averaged importance vector in canonical feature order.
std::vector<double> mean_importances(const CvSummary& cv) {
  const std::vector<std::string> names = canonical_feature_names();
  std::vector<double> out(names.size(), 0.0);
  if (cv.folds.empty()) return out;
  for (const FoldResults& f : cv.folds) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      const auto it = f.feature_importances.find(names[i]);
      if (it != f.feature_importances.end()) out[i] += it->second;
    }
  }
  for (double& v : out) v /= static_cast<double>(cv.folds.size());
  return out;
}

}  // namespace

WorkflowResult run_workflow(const WorkflowConfig& raw_config) {
  WorkflowConfig config = raw_config;
  validate_config(config);
  const int threads = resolve_threads(config);

  const LabeledDataset segments = build_segments(config);
  const std::vector<int> int_labels = labels_as_ints(segments);
  const std::size_t n_segments = segments.size();

  WorkflowResult result;
  result.class_names = segments.class_names;
  for (Algorithm a : config.algorithms) {
    for (int f : config.factors) {
      DownsampleConfig dc;
      dc.algorithm = a;
      dc.factor = f;
      dc.preselect_ratio = config.preselect_ratio;
      result.grid.push_back(dc);
    }
  }

  // Per-original caches for the metric battery.
  std::vector<OriginalCache> caches(n_segments);
  parallel_for(n_segments, threads,
               [&](std::size_t i) { caches[i] = make_original_cache(segments.signals[i]); });

  const std::uint64_t cv_seed = mix_seed(config.seed, kStreamFolds);

  // Original evaluation: features on the untouched segments. The same CV
  // seed is shared by every configuration so the fold partition is
  // identical across the whole grid and fold accuracies stay paired.
  {
    const FeatureDataset fd =
        features_of_signals(segments.signals, segments, int_labels);
    result.original.is_original = true;
    result.original.cv = cross_validate(fd, config.folds, cv_seed);
    result.original_extraction_s = mean_fold_extraction(result.original.cv);
  }

  // Grid cells: downsample, metric battery, features, cross-validation.
  result.summaries.resize(result.grid.size());
  result.evaluations.resize(result.grid.size());
  parallel_for(result.grid.size(), threads, [&](std::size_t g) {
    const DownsampleConfig& dc = result.grid[g];
    std::vector<MetricVector> profiles;
    profiles.reserve(n_segments);
    std::vector<Signal> downsampled;
    downsampled.reserve(n_segments);
    for (std::size_t i = 0; i < n_segments; ++i) {
      downsampled.push_back(apply_downsample(segments.signals[i], dc));
      profiles.push_back(
          metric_profile(segments.signals[i], caches[i], downsampled.back()));
    }
    result.summaries[g] = summarize_config(profiles, dc);
    const FeatureDataset fd = features_of_signals(downsampled, segments, int_labels);
    result.evaluations[g].config = dc;
    result.evaluations[g].is_original = false;
    result.evaluations[g].cv = cross_validate(fd, config.folds, cv_seed);
  });

  // Metric-only pairwise ranking.
  result.rank_eval =
      evaluate_ranker(result.summaries, result.evaluations, config.lambdas,
                      config.folds, config.ranker_l2, mix_seed(config.seed, kStreamRankEval));
  const BuildPairsResult pairs = build_pairs(result.summaries, result.evaluations);
  result.ranker =
      train_ranker(pairs.pairs, config.ranker_l2, mix_seed(config.seed, kStreamRankFit));
  result.predicted_ranking = rank_by_wins(result.ranker, result.summaries);

  // Per-algorithm Friedman / Nemenyi critical factors.
  const std::vector<double> original_accs = fold_accuracies(result.original.cv);
  for (Algorithm a : config.algorithms) {
    std::map<int, std::vector<double>> per_factor;
    for (std::size_t g = 0; g < result.grid.size(); ++g) {
      if (result.grid[g].algorithm != a) continue;
      per_factor[result.grid[g].factor] = fold_accuracies(result.evaluations[g].cv);
    }
    AlgorithmStats stats;
    std::vector<std::vector<double>> matrix(original_accs.size());
    for (std::size_t r = 0; r < matrix.size(); ++r) {
      matrix[r].push_back(original_accs[r]);
      for (const auto& [factor, accs] : per_factor) matrix[r].push_back(accs[r]);
    }
    stats.friedman = friedman_test(matrix);
    const int k = static_cast<int>(per_factor.size()) + 1;
    if (k >= 2 && k <= 30) {
      stats.critical_difference =
          nemenyi_critical_difference(k, static_cast<int>(original_accs.size()));
      stats.critical_factor = critical_factor(per_factor, original_accs);
    }
    result.per_algorithm[algorithm_name(a)] = stats;
  }

  // Fold-stability and importance geometry.
  const auto fold_sets = [](const CvSummary& cv) {
    std::vector<std::set<std::string>> sets;
    for (const FoldResults& f : cv.folds) {
      sets.emplace_back(f.selected_features.begin(), f.selected_features.end());
    }
    return sets;
  };
  result.jaccard["Original"] = jaccard_stability(fold_sets(result.original.cv));
  for (std::size_t g = 0; g < result.grid.size(); ++g) {
    result.jaccard[result.grid[g].id()] =
        jaccard_stability(fold_sets(result.evaluations[g].cv));
  }

  result.point_ids.push_back("Original");
  result.importance_vectors.push_back(mean_importances(result.original.cv));
  for (std::size_t g = 0; g < result.grid.size(); ++g) {
    result.point_ids.push_back(result.grid[g].id());
    result.importance_vectors.push_back(mean_importances(result.evaluations[g].cv));
  }

  const std::size_t n_points = result.importance_vectors.size();
  if (n_points >= 4) {
    const int k_max = std::min<int>(10, static_cast<int>(n_points) - 1);
    result.clusters = cluster_importances(result.importance_vectors, 2, k_max,
                                          mix_seed(config.seed, kStreamCluster));
    result.mds =
        mds_embed(result.importance_vectors, 2, mix_seed(config.seed, kStreamMds));
    if (config.factors.size() >= 2) {
      std::vector<EmbeddedPoint> points;
      points.reserve(n_points);
      EmbeddedPoint orig;
      orig.is_original = true;
      points.push_back(orig);
      for (const DownsampleConfig& dc : result.grid) {
        EmbeddedPoint p;
        p.algorithm = algorithm_name(dc.algorithm);
        p.factor = dc.factor;
        points.push_back(p);
      }
      result.trajectories = trajectory_export(result.mds.embedding, points);
    }
  }

  // Speedup / accuracy trade-off.
  {
    ParetoPoint orig;
    orig.is_original = true;
    orig.extraction_time_s = std::max(result.original_extraction_s, 1e-12);
    orig.mean_accuracy = result.original.cv.mean_accuracy;
    result.pareto_points.push_back(orig);
    for (std::size_t g = 0; g < result.grid.size(); ++g) {
      ParetoPoint p;
      p.config = result.grid[g];
      p.extraction_time_s =
          std::max(mean_fold_extraction(result.evaluations[g].cv), 1e-12);
      p.mean_accuracy = result.evaluations[g].cv.mean_accuracy;
      result.pareto_points.push_back(p);
    }
    mark_dominated(result.pareto_points);
  }

  return result;
}

// ---------------------------------------------------------------------------
// Artifacts
// ---------------------------------------------------------------------------

namespace {

std::string config_label(const DownsampleConfig& dc) { return dc.id(); }

std::string metric_summaries_csv(const WorkflowResult& r) {
  std::vector<std::string> header = {"config", "algorithm", "factor",
                                     "preselect_ratio", "n_pairs", "n_excluded"};
  for (const auto& name : MetricVector::names()) {
    header.push_back("mean_" + std::string(name));
  }
  for (const auto& name : MetricVector::names()) {
    header.push_back("std_" + std::string(name));
  }
  std::string csv = join_row(header);
  for (const ConfigMetricSummary& s : r.summaries) {
    std::vector<std::string> row = {
        config_label(s.config), algorithm_name(s.config.algorithm),
        std::to_string(s.config.factor), std::to_string(s.config.preselect_ratio),
        std::to_string(s.n_pairs), std::to_string(s.n_excluded)};
    for (double v : s.mean_metrics.to_array()) row.push_back(format_double(v));
    for (double v : s.std_metrics.to_array()) row.push_back(format_double(v));
    csv += join_row(row);
  }
  return csv;
}

void evaluation_rows(std::string& csv, const std::string& label,
                     const std::string& algorithm, const std::string& factor,
                     bool is_original, const CvSummary& cv) {
  for (const FoldResults& f : cv.folds) {
    std::string selected;
    for (std::size_t i = 0; i < f.selected_features.size(); ++i) {
      if (i > 0) selected += "|";
      selected += f.selected_features[i];
    }
    csv += join_row({label, algorithm, factor, is_original ? "1" : "0",
                     std::to_string(f.fold_id), format_double(f.accuracy),
                     format_double(f.precision_macro), format_double(f.recall_macro),
                     format_double(f.f1_macro), selected});
  }
}

std::string evaluations_csv(const WorkflowResult& r) {
  std::string csv = join_row({"config", "algorithm", "factor", "is_original", "fold",
                              "accuracy", "precision_macro", "recall_macro",
                              "f1_macro", "selected_features"});
  evaluation_rows(csv, "Original", "", "", true, r.original.cv);
  for (std::size_t g = 0; g < r.grid.size(); ++g) {
    evaluation_rows(csv, config_label(r.grid[g]), algorithm_name(r.grid[g].algorithm),
                    std::to_string(r.grid[g].factor), false, r.evaluations[g].cv);
  }
  return csv;
}

std::string cv_summary_csv(const WorkflowResult& r) {
  std::string csv = join_row({"config", "algorithm", "factor", "preselect_ratio",
                              "is_original", "mean_accuracy", "std_accuracy",
                              "jaccard_stability"});
  csv += join_row({"Original", "", "", "", "1",
                   format_double(r.original.cv.mean_accuracy),
                   format_double(r.original.cv.std_accuracy),
                   format_double(r.jaccard.at("Original"))});
  for (std::size_t g = 0; g < r.grid.size(); ++g) {
    const DownsampleConfig& dc = r.grid[g];
    csv += join_row({config_label(dc), algorithm_name(dc.algorithm),
                     std::to_string(dc.factor), std::to_string(dc.preselect_ratio), "0",
                     format_double(r.evaluations[g].cv.mean_accuracy),
                     format_double(r.evaluations[g].cv.std_accuracy),
                     format_double(r.jaccard.at(config_label(dc)))});
  }
  return csv;
}

std::string per_class_csv(const WorkflowResult& r) {
  std::string csv =
      join_row({"config", "class", "sensitivity", "specificity"});
  const auto emit = [&](const std::string& label, const CvSummary& cv,
                        const std::vector<std::string>& class_names) {
    // Pool the fold confusions, then rate the pooled matrix.
    if (cv.folds.empty()) return;
    Confusion pooled = cv.folds.front().confusion;
    for (std::size_t f = 1; f < cv.folds.size(); ++f) {
      const Confusion& c = cv.folds[f].confusion;
      for (std::size_t i = 0; i < pooled.size(); ++i) {
        for (std::size_t j = 0; j < pooled.size(); ++j) pooled[i][j] += c[i][j];
      }
    }
    const std::map<int, ClassRates> rates = per_class_rates(pooled);
    for (const auto& [cls, rate] : rates) {
      const std::string name = cls >= 0 && static_cast<std::size_t>(cls) < class_names.size()
                                   ? class_names[static_cast<std::size_t>(cls)]
                                   : std::to_string(cls);
      csv += join_row({label, name, format_double(rate.sensitivity),
                       format_double(rate.specificity)});
    }
  };
  emit("Original", r.original.cv, r.class_names);
  for (std::size_t g = 0; g < r.grid.size(); ++g) {
    emit(config_label(r.grid[g]), r.evaluations[g].cv, r.class_names);
  }
  return csv;
}

std::string importances_csv(const WorkflowResult& r) {
  const std::vector<std::string> names = canonical_feature_names();
  std::string csv = join_row({"config", "feature", "mean_importance"});
  for (std::size_t p = 0; p < r.point_ids.size(); ++p) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      csv += join_row({r.point_ids[p], names[i],
                       format_double(r.importance_vectors[p][i])});
    }
  }
  return csv;
}

std::string ranking_csv(const WorkflowResult& r) {
  // True order: mean accuracy descending, ties by config id.
  std::vector<std::pair<double, std::string>> truth;
  for (std::size_t g = 0; g < r.grid.size(); ++g) {
    truth.push_back({r.evaluations[g].cv.mean_accuracy, config_label(r.grid[g])});
  }
  std::sort(truth.begin(), truth.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::map<std::string, std::size_t> true_rank;
  for (std::size_t i = 0; i < truth.size(); ++i) true_rank[truth[i].second] = i + 1;
  std::map<std::string, double> accuracy;
  for (std::size_t g = 0; g < r.grid.size(); ++g) {
    accuracy[config_label(r.grid[g])] = r.evaluations[g].cv.mean_accuracy;
  }
  std::string csv = join_row(
      {"predicted_rank", "config", "wins", "mean_accuracy", "true_rank"});
  for (std::size_t i = 0; i < r.predicted_ranking.size(); ++i) {
    const std::string label = config_label(r.predicted_ranking[i].config);
    csv += join_row({std::to_string(i + 1), label,
                     std::to_string(r.predicted_ranking[i].wins),
                     format_double(accuracy.at(label)),
                     std::to_string(true_rank.at(label))});
  }
  return csv;
}

std::string ranker_json(const WorkflowResult& r, const WorkflowConfig& config) {
  json j;
  const auto& names = MetricVector::names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    j["weights"][std::string(names[i])] = r.ranker.weights[i];
    j["standardize_std"][std::string(names[i])] = r.ranker.standardize_std[i];
  }
  j["bias"] = r.ranker.bias;
  j["fit_bias"] = r.ranker.fit_bias;
  j["evaluation"]["kendall_tau"] = r.rank_eval.kendall_tau;
  j["evaluation"]["plain_accuracy"] = r.rank_eval.plain_accuracy;
  for (const auto& [lambda, value] : r.rank_eval.weighted_accuracy) {
    j["evaluation"]["weighted_accuracy"][format_double(lambda)] = value;
  }
  j["evaluation"]["n_pairs"] = r.rank_eval.n_pairs;
  j["evaluation"]["n_ties_dropped"] = r.rank_eval.n_ties_dropped;
  j["l2"] = config.ranker_l2;
  return j.dump(2) + "\n";
}

std::string friedman_csv(const WorkflowResult& r) {
  std::string csv = join_row({"algorithm", "statistic", "p_value",
                              "critical_difference", "critical_factor"});
  for (const auto& [name, stats] : r.per_algorithm) {
    csv += join_row({name, format_double(stats.friedman.statistic),
                     format_double(stats.friedman.p_value),
                     format_double(stats.critical_difference),
                     stats.critical_factor ? std::to_string(*stats.critical_factor)
                                           : ""});
  }
  return csv;
}

std::string clusters_csv(const WorkflowResult& r) {
  std::string csv = join_row({"config", "cluster"});
  if (r.clusters.assignment.size() == r.point_ids.size()) {
    for (std::size_t i = 0; i < r.point_ids.size(); ++i) {
      csv += join_row({r.point_ids[i], std::to_string(r.clusters.assignment[i])});
    }
  }
  return csv;
}

std::string embedding_csv(const WorkflowResult& r) {
  std::string csv = join_row({"config", "x", "y"});
  if (r.mds.embedding.size() == r.point_ids.size()) {
    for (std::size_t i = 0; i < r.point_ids.size(); ++i) {
      csv += join_row({r.point_ids[i], format_double(r.mds.embedding[i][0]),
                       format_double(r.mds.embedding[i][1])});
    }
  }
  return csv;
}

std::string analysis_json(const WorkflowResult& r) {
  json j;
  if (!r.clusters.assignment.empty()) {
    j["clusters"]["chosen_k"] = r.clusters.chosen_k;
    for (const auto& [k, sil] : r.clusters.silhouettes) {
      j["clusters"]["silhouettes"][std::to_string(k)] = sil;
    }
  }
  if (!r.mds.embedding.empty()) {
    j["mds"]["pearson_fidelity"] = r.mds.pearson_fidelity;
    j["mds"]["spearman_fidelity"] = r.mds.spearman_fidelity;
    j["mds"]["stress"] = r.mds.stress;
    j["mds"]["iterations"] = r.mds.stress_history.size();
  }
  for (const auto& [name, stats] : r.per_algorithm) {
    json a;
    a["friedman_statistic"] = stats.friedman.statistic;
    a["friedman_p"] = stats.friedman.p_value;
    a["critical_difference"] = stats.critical_difference;
    if (stats.critical_factor) a["critical_factor"] = *stats.critical_factor;
    j["per_algorithm"][name] = a;
  }
  return j.dump(2) + "\n";
}

std::string trajectories_json(const WorkflowResult& r) {
  json j;
  j["lines"] = json::array();
  for (const Polyline& line : r.trajectories) {
    json l;
    l["algorithm"] = line.algorithm;
    l["fold"] = line.fold;
    l["vertices"] = line.vertices;
    j["lines"].push_back(l);
  }
  return j.dump(2) + "\n";
}

std::string timing_csv(const WorkflowResult& r) {
  std::string csv = join_row({"config", "fold", "extraction_time_s"});
  const auto emit = [&](const std::string& label, const CvSummary& cv) {
    for (const FoldResults& f : cv.folds) {
      csv += join_row({label, std::to_string(f.fold_id),
                       format_double(f.extraction_time_s)});
    }
  };
  emit("Original", r.original.cv);
  for (std::size_t g = 0; g < r.grid.size(); ++g) {
    emit(config_label(r.grid[g]), r.evaluations[g].cv);
  }
  return csv;
}

std::string speedup_csv(const WorkflowResult& r) {
  std::string csv = join_row({"config", "t_orig_s", "t_ds_s", "speedup"});
  for (std::size_t g = 0; g < r.grid.size(); ++g) {
    const double t_ds =
        std::max(mean_fold_extraction(r.evaluations[g].cv), 1e-12);
    const double t_orig = std::max(r.original_extraction_s, 1e-12);
    const SpeedupRecord sp = speedup(t_orig, t_ds);
    csv += join_row({config_label(r.grid[g]), format_double(sp.t_orig),
                     format_double(sp.t_ds), format_double(sp.s)});
  }
  return csv;
}

std::string pareto_csv(const WorkflowResult& r) {
  std::string csv = join_row(
      {"config", "is_original", "extraction_time_s", "mean_accuracy", "dominated"});
  for (const ParetoPoint& p : r.pareto_points) {
    csv += join_row({p.label(), p.is_original ? "1" : "0",
                     format_double(p.extraction_time_s),
                     format_double(p.mean_accuracy), p.dominated ? "1" : "0"});
  }
  return csv;
}

struct ManifestEntry {
  std::string path;  // relative to the artifact dir
  std::string group;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

void write_manifest(const std::filesystem::path& dir,
                    std::vector<ManifestEntry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.path < b.path; });
  Sha256 combined;
  json files = json::array();
  for (const ManifestEntry& e : entries) {
    files.push_back({{"path", e.path},
                     {"group", e.group},
                     {"sha256", e.sha256},
                     {"bytes", e.bytes}});
    if (e.group == "deterministic") {
      combined.update(e.path);
      combined.update(e.sha256);
    }
  }
  json manifest;
  manifest["files"] = files;
  std::string digest_hex;
  {
    const auto digest = combined.digest();
    static const char* hex = "0123456789abcdef";
    for (std::uint8_t b : digest) {
      digest_hex.push_back(hex[b >> 4]);
      digest_hex.push_back(hex[b & 0x0f]);
    }
  }
  manifest["deterministic_digest"] = digest_hex;
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

ManifestEntry emit_artifact(const std::filesystem::path& dir, const std::string& name,
                            const std::string& group, const std::string& content) {
  const std::filesystem::path path = dir / name;
  write_text_file(path, content);
  ManifestEntry e;
  e.path = name;
  e.group = group;
  e.sha256 = sha256_hex(content);
  e.bytes = content.size();
  return e;
}

}  // namespace

std::filesystem::path write_artifacts(const WorkflowResult& result,
                                      const WorkflowConfig& config) {
  const std::filesystem::path dir = config.output_dir;
  std::filesystem::create_directories(dir);
  std::vector<ManifestEntry> entries;
  entries.push_back(
      emit_artifact(dir, "config.json", "deterministic", config_to_json(config)));
  entries.push_back(emit_artifact(dir, "metric_summaries.csv", "deterministic",
                                  metric_summaries_csv(result)));
  entries.push_back(
      emit_artifact(dir, "evaluations.csv", "deterministic", evaluations_csv(result)));
  entries.push_back(
      emit_artifact(dir, "cv_summary.csv", "deterministic", cv_summary_csv(result)));
  entries.push_back(
      emit_artifact(dir, "per_class.csv", "deterministic", per_class_csv(result)));
  entries.push_back(
      emit_artifact(dir, "importances.csv", "deterministic", importances_csv(result)));
  entries.push_back(
      emit_artifact(dir, "ranking.csv", "deterministic", ranking_csv(result)));
  entries.push_back(
      emit_artifact(dir, "ranker.json", "deterministic", ranker_json(result, config)));
  entries.push_back(
      emit_artifact(dir, "friedman.csv", "deterministic", friedman_csv(result)));
  entries.push_back(
      emit_artifact(dir, "clusters.csv", "deterministic", clusters_csv(result)));
  entries.push_back(
      emit_artifact(dir, "embedding.csv", "deterministic", embedding_csv(result)));
  entries.push_back(
      emit_artifact(dir, "analysis.json", "deterministic", analysis_json(result)));
  entries.push_back(emit_artifact(dir, "trajectories.json", "deterministic",
                                  trajectories_json(result)));
  entries.push_back(emit_artifact(dir, "timing.csv", "timing", timing_csv(result)));
  entries.push_back(emit_artifact(dir, "speedup.csv", "timing", speedup_csv(result)));
  entries.push_back(emit_artifact(dir, "pareto.csv", "timing", pareto_csv(result)));
  write_manifest(dir, std::move(entries));
  return dir / "manifest.json";
}

std::string manifest_deterministic_digest(const std::filesystem::path& manifest_path) {
  json j;
  try {
    j = json::parse(read_text_file(manifest_path));
  } catch (const json::exception& e) {
    throw DataError("manifest " + manifest_path.string() + ": " + e.what());
  }
  if (!j.contains("deterministic_digest")) {
    throw DataError("manifest " + manifest_path.string() +
                    ": missing deterministic_digest");
  }
  return j.at("deterministic_digest").get<std::string>();
}

std::filesystem::path cmd_run(WorkflowConfig config) {
  validate_config(config);
  const WorkflowResult result = run_workflow(config);
  return write_artifacts(result, config);
}

// ---------------------------------------------------------------------------
// Bench
// ---------------------------------------------------------------------------

namespace {

double median_extraction_time(const Signal& signal) {
  for (int i = 0; i < 3; ++i) (void)extract_features(signal);  // warmup
  std::vector<double> times;
  times.reserve(5);
  for (int i = 0; i < 5; ++i) times.push_back(extract_features(signal).wall_time_s);
  std::sort(times.begin(), times.end());
  return times[2];
}

}  // namespace

std::vector<BenchRow> run_bench(const WorkflowConfig& raw_config) {
  WorkflowConfig config = raw_config;
  validate_config(config);
  const LabeledDataset segments = build_segments(config);
  if (segments.size() == 0) throw DataError("bench: no segments");
  const Signal& probe = segments.signals.front();
  const double t_orig = median_extraction_time(probe);
  std::vector<BenchRow> rows;
  for (Algorithm a : config.algorithms) {
    for (int f : config.factors) {
      DownsampleConfig dc;
      dc.algorithm = a;
      dc.factor = f;
      dc.preselect_ratio = config.preselect_ratio;
      const Signal ds = apply_downsample(probe, dc);
      BenchRow row;
      row.config = dc;
      row.t_orig_s = t_orig;
      row.t_ds_s = median_extraction_time(ds);
      row.s = speedup(std::max(t_orig, 1e-12), std::max(row.t_ds_s, 1e-12)).s;
      rows.push_back(row);
    }
  }
  return rows;
}

std::filesystem::path cmd_bench(WorkflowConfig config) {
  validate_config(config);
  const std::vector<BenchRow> rows = run_bench(config);
  std::string csv = join_row({"config", "t_orig_s", "t_ds_s", "speedup"});
  for (const BenchRow& r : rows) {
    csv += join_row({r.config.id(), format_double(r.t_orig_s),
                     format_double(r.t_ds_s), format_double(r.s)});
  }
  const std::filesystem::path path = config.output_dir / "bench.csv";
  write_text_file(path, csv);
  return path;
}

// ---------------------------------------------------------------------------
// Independent steps
// ---------------------------------------------------------------------------

std::filesystem::path cmd_synth(WorkflowConfig config) {
  validate_config(config);
  if (!config.dataset.is_synth) {
    throw ConfigError("synth: config selects a file dataset, nothing to generate");
  }
  const LabeledDataset ds =
      synth_dataset(synth_class_specs(config.dataset.synth),
                    config.dataset.synth.signals_per_class,
                    config.dataset.synth.sample_rate_hz,
                    mix_seed(config.seed, kStreamDataset));
  const std::filesystem::path dir = config.output_dir / "dataset";
  save_dataset_raw(ds, dir);
  return dir / "manifest.json";
}

std::filesystem::path cmd_metrics(WorkflowConfig config) {
  validate_config(config);
  const int threads = resolve_threads(config);
  const LabeledDataset segments = build_segments(config);
  std::vector<OriginalCache> caches(segments.size());
  parallel_for(segments.size(), threads,
               [&](std::size_t i) { caches[i] = make_original_cache(segments.signals[i]); });
  std::vector<DownsampleConfig> grid;
  for (Algorithm a : config.algorithms) {
    for (int f : config.factors) {
      DownsampleConfig dc;
      dc.algorithm = a;
      dc.factor = f;
      dc.preselect_ratio = config.preselect_ratio;
      grid.push_back(dc);
    }
  }
  WorkflowResult partial;
  partial.grid = grid;
  partial.summaries.resize(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t g) {
    std::vector<MetricVector> profiles;
    profiles.reserve(segments.size());
    for (std::size_t i = 0; i < segments.size(); ++i) {
      const Signal ds = apply_downsample(segments.signals[i], grid[g]);
      profiles.push_back(metric_profile(segments.signals[i], caches[i], ds));
    }
    partial.summaries[g] = summarize_config(profiles, grid[g]);
  });
  const std::filesystem::path path = config.output_dir / "metric_summaries.csv";
  write_text_file(path, metric_summaries_csv(partial));
  return path;
}

namespace {

DownsampleConfig config_from_row(const std::vector<std::string>& row,
                                 std::size_t alg_col, std::size_t factor_col,
                                 std::size_t ratio_col) {
  DownsampleConfig dc;
  dc.algorithm = parse_algorithm(row[alg_col]);
  dc.factor = static_cast<int>(parse_double(row[factor_col], "factor"));
  dc.preselect_ratio = static_cast<int>(parse_double(row[ratio_col], "preselect_ratio"));
  return dc;
}

}  // namespace

std::filesystem::path cmd_rank(const std::filesystem::path& artifact_dir,
                               const std::vector<double>& lambdas, int folds,
                               double l2, std::uint64_t seed) {
  const std::filesystem::path summaries_path = artifact_dir / "metric_summaries.csv";
  const std::filesystem::path cv_path = artifact_dir / "cv_summary.csv";
  const auto summary_rows = read_csv(summaries_path);
  const auto cv_rows = read_csv(cv_path);

  const auto& sh = summary_rows.front();
  const std::size_t s_alg = column_index(sh, "algorithm", summaries_path);
  const std::size_t s_factor = column_index(sh, "factor", summaries_path);
  const std::size_t s_ratio = column_index(sh, "preselect_ratio", summaries_path);
  const std::size_t s_pairs = column_index(sh, "n_pairs", summaries_path);
  std::vector<std::size_t> mean_cols, std_cols;
  for (const auto& name : MetricVector::names()) {
    mean_cols.push_back(column_index(sh, "mean_" + std::string(name), summaries_path));
    std_cols.push_back(column_index(sh, "std_" + std::string(name), summaries_path));
  }
  std::vector<ConfigMetricSummary> summaries;
  for (std::size_t i = 1; i < summary_rows.size(); ++i) {
    const auto& row = summary_rows[i];
    ConfigMetricSummary s;
    s.config = config_from_row(row, s_alg, s_factor, s_ratio);
    s.n_pairs = static_cast<std::size_t>(parse_double(row[s_pairs], "n_pairs"));
    std::array<double, MetricVector::kCount> mean{}, sd{};
    for (std::size_t m = 0; m < MetricVector::kCount; ++m) {
      mean[m] = parse_double(row[mean_cols[m]], "mean metric");
      sd[m] = parse_double(row[std_cols[m]], "std metric");
    }
    s.mean_metrics = MetricVector::from_array(mean);
    s.std_metrics = MetricVector::from_array(sd);
    summaries.push_back(s);
  }

  const auto& ch = cv_rows.front();
  const std::size_t c_alg = column_index(ch, "algorithm", cv_path);
  const std::size_t c_factor = column_index(ch, "factor", cv_path);
  const std::size_t c_ratio = column_index(ch, "preselect_ratio", cv_path);
  const std::size_t c_orig = column_index(ch, "is_original", cv_path);
  const std::size_t c_acc = column_index(ch, "mean_accuracy", cv_path);
  std::vector<ConfigEvaluation> evaluations;
  for (std::size_t i = 1; i < cv_rows.size(); ++i) {
    const auto& row = cv_rows[i];
    if (row[c_orig] == "1") continue;
    ConfigEvaluation e;
    e.config = config_from_row(row, c_alg, c_factor, c_ratio);
    e.cv.mean_accuracy = parse_double(row[c_acc], "mean_accuracy");
    evaluations.push_back(e);
  }

  // Align evaluation order with the summaries.
  std::vector<ConfigEvaluation> aligned;
  for (const ConfigMetricSummary& s : summaries) {
    const auto it = std::find_if(
        evaluations.begin(), evaluations.end(),
        [&](const ConfigEvaluation& e) { return e.config == s.config; });
    if (it == evaluations.end()) {
      throw DataError("rank: no cv_summary row for " + s.config.id());
    }
    aligned.push_back(*it);
  }

  WorkflowResult partial;
  partial.rank_eval = evaluate_ranker(summaries, aligned, lambdas, folds, l2,
                                      mix_seed(seed, kStreamRankEval));
  const BuildPairsResult pairs = build_pairs(summaries, aligned);
  partial.ranker = train_ranker(pairs.pairs, l2, mix_seed(seed, kStreamRankFit));
  partial.predicted_ranking = rank_by_wins(partial.ranker, summaries);
  for (const ConfigMetricSummary& s : summaries) partial.grid.push_back(s.config);
  partial.evaluations = aligned;

  WorkflowConfig cfg;
  cfg.ranker_l2 = l2;
  write_text_file(artifact_dir / "ranking.csv", ranking_csv(partial));
  write_text_file(artifact_dir / "ranker.json", ranker_json(partial, cfg));
  return artifact_dir / "ranking.csv";
}

// ---------------------------------------------------------------------------
// Plots
// ---------------------------------------------------------------------------

namespace {

void append_plot_entries(const std::filesystem::path& dir,
                         const std::vector<ManifestEntry>& plot_entries) {
  const std::filesystem::path manifest_path = dir / "manifest.json";
  if (!std::filesystem::exists(manifest_path)) return;
  json manifest;
  try {
    manifest = json::parse(read_text_file(manifest_path));
  } catch (const json::exception& e) {
    throw DataError("manifest " + manifest_path.string() + ": " + e.what());
  }
  json files = json::array();
  for (const json& f : manifest.at("files")) {
    if (f.at("group").get<std::string>() != "plots") files.push_back(f);
  }
  for (const ManifestEntry& e : plot_entries) {
    files.push_back({{"path", e.path},
                     {"group", e.group},
                     {"sha256", e.sha256},
                     {"bytes", e.bytes}});
  }
  manifest["files"] = files;
  write_text_file(manifest_path, manifest.dump(2) + "\n");
}

}  // namespace

std::vector<std::filesystem::path> cmd_plot(const std::filesystem::path& artifact_dir) {
  const std::filesystem::path cv_path = artifact_dir / "cv_summary.csv";
  const std::filesystem::path friedman_path = artifact_dir / "friedman.csv";
  const std::filesystem::path per_class_path = artifact_dir / "per_class.csv";
  const std::filesystem::path pareto_path = artifact_dir / "pareto.csv";
  const std::filesystem::path traj_path = artifact_dir / "trajectories.json";

  // --- Accuracy vs factor with the Original reference band.
  const auto cv_rows = read_csv(cv_path);
  const auto& ch = cv_rows.front();
  const std::size_t c_alg = column_index(ch, "algorithm", cv_path);
  const std::size_t c_factor = column_index(ch, "factor", cv_path);
  const std::size_t c_orig = column_index(ch, "is_original", cv_path);
  const std::size_t c_mean = column_index(ch, "mean_accuracy", cv_path);
  const std::size_t c_std = column_index(ch, "std_accuracy", cv_path);
  double original_mean = 0.0;
  double original_std = 0.0;
  std::map<std::string, AccuracySeries> series;
  for (std::size_t i = 1; i < cv_rows.size(); ++i) {
    const auto& row = cv_rows[i];
    if (row[c_orig] == "1") {
      original_mean = parse_double(row[c_mean], "mean_accuracy");
      original_std = parse_double(row[c_std], "std_accuracy");
      continue;
    }
    AccuracySeries& s = series[row[c_alg]];
    s.algorithm = row[c_alg];
    s.points.push_back({static_cast<int>(parse_double(row[c_factor], "factor")),
                        parse_double(row[c_mean], "mean_accuracy")});
  }
  if (series.empty()) throw DataError(cv_path.string() + ": no configurations");
  const auto friedman_rows = read_csv(friedman_path);
  const auto& fh = friedman_rows.front();
  const std::size_t f_alg = column_index(fh, "algorithm", friedman_path);
  const std::size_t f_cf = column_index(fh, "critical_factor", friedman_path);
  for (std::size_t i = 1; i < friedman_rows.size(); ++i) {
    const auto& row = friedman_rows[i];
    const auto it = series.find(row[f_alg]);
    if (it != series.end() && !row[f_cf].empty()) {
      it->second.critical_factor =
          static_cast<int>(parse_double(row[f_cf], "critical_factor"));
    }
  }
  std::vector<AccuracySeries> series_list;
  for (const auto& [name, s] : series) series_list.push_back(s);

  // --- Per-class heat grid.
  const auto pc_rows = read_csv(per_class_path);
  const auto& ph = pc_rows.front();
  const std::size_t p_cfg = column_index(ph, "config", per_class_path);
  const std::size_t p_class = column_index(ph, "class", per_class_path);
  const std::size_t p_sens = column_index(ph, "sensitivity", per_class_path);
  std::vector<std::string> row_labels;
  std::vector<std::string> class_names;
  std::map<std::string, std::map<std::string, double>> sens;
  for (std::size_t i = 1; i < pc_rows.size(); ++i) {
    const auto& row = pc_rows[i];
    if (!sens.count(row[p_cfg])) row_labels.push_back(row[p_cfg]);
    if (std::find(class_names.begin(), class_names.end(), row[p_class]) ==
        class_names.end()) {
      class_names.push_back(row[p_class]);
    }
    sens[row[p_cfg]][row[p_class]] = parse_double(row[p_sens], "sensitivity");
  }
  std::vector<std::vector<double>> heat;
  for (const std::string& label : row_labels) {
    std::vector<double> hrow;
    for (const std::string& cls : class_names) {
      const auto& m = sens.at(label);
      const auto it = m.find(cls);
      hrow.push_back(it == m.end() ? 0.0 : it->second);
    }
    heat.push_back(hrow);
  }

  // --- Pareto scatter.
  const auto pareto_rows = read_csv(pareto_path);
  const auto& qh = pareto_rows.front();
  const std::size_t q_cfg = column_index(qh, "config", pareto_path);
  const std::size_t q_orig = column_index(qh, "is_original", pareto_path);
  const std::size_t q_time = column_index(qh, "extraction_time_s", pareto_path);
  const std::size_t q_acc = column_index(qh, "mean_accuracy", pareto_path);
  const std::size_t q_dom = column_index(qh, "dominated", pareto_path);
  std::vector<ParetoMark> marks;
  for (std::size_t i = 1; i < pareto_rows.size(); ++i) {
    const auto& row = pareto_rows[i];
    ParetoMark m;
    m.label = row[q_cfg];
    m.is_original = row[q_orig] == "1";
    m.time_s = parse_double(row[q_time], "extraction_time_s");
    m.accuracy = parse_double(row[q_acc], "mean_accuracy");
    m.dominated = row[q_dom] == "1";
    marks.push_back(m);
  }

  // --- Trajectories.
  json traj;
  try {
    traj = json::parse(read_text_file(traj_path));
  } catch (const json::exception& e) {
    throw DataError("trajectories " + traj_path.string() + ": " + e.what());
  }
  std::vector<Polyline> lines;
  for (const json& l : traj.at("lines")) {
    Polyline line;
    line.algorithm = l.at("algorithm").get<std::string>();
    line.fold = l.at("fold").get<int>();
    for (const json& v : l.at("vertices")) {
      line.vertices.push_back(v.get<std::vector<double>>());
    }
    lines.push_back(line);
  }
  if (lines.empty()) {
    throw DataError("trajectories " + traj_path.string() + ": no trajectories to plot");
  }

  const std::filesystem::path plot_dir = artifact_dir / "plots";
  std::vector<ManifestEntry> entries;
  std::vector<std::filesystem::path> written;
  const auto emit = [&](const std::string& name, const std::string& content) {
    entries.push_back(emit_artifact(artifact_dir, "plots/" + name, "plots", content));
    written.push_back(plot_dir / name);
  };
  emit("accuracy_vs_factor.svg",
       svg_accuracy_chart(series_list, original_mean, original_std));
  emit("class_heat.svg", svg_class_heat(row_labels, class_names, heat));
  emit("pareto.svg", svg_pareto(marks));
  emit("trajectories.svg", svg_trajectories(lines));
  append_plot_entries(artifact_dir, entries);
  return written;
}

}  // namespace dsloss
