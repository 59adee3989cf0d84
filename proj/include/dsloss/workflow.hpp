#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dsloss/analysis.hpp"
#include "dsloss/classify.hpp"
#include "dsloss/io.hpp"
#include "dsloss/metrics.hpp"
#include "dsloss/ranking.hpp"
#include "dsloss/signal.hpp"
#include "dsloss/stats.hpp"

namespace dsloss {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

// Parameters of the built-in three-class synthetic waveform dataset: the
// classes differ in phase count, phase width and firing rate, so shape,
// spectral and rhythm features all separate them.
struct SynthSpec {
  int signals_per_class = 12;
  double duration_s = 4.0;
  double sample_rate_hz = 23437.5;
  double noise_std = 0.05;
};

struct DatasetSource {
  bool is_synth = true;
  SynthSpec synth;                      // used when is_synth
  std::filesystem::path path;           // used otherwise
  DataFormat format = DataFormat::Csv;  // used otherwise
};

struct WorkflowConfig {
  DatasetSource dataset;
  std::vector<Algorithm> algorithms = {Algorithm::Decimate, Algorithm::MinMax,
                                       Algorithm::M4, Algorithm::Lttb,
                                       Algorithm::MinMaxLttb};
  std::vector<int> factors;  // empty = default_factors()
  int preselect_ratio = 4;
  double segment_seconds = 2.0;
  int folds = 5;
  std::uint64_t seed = 42;
  std::vector<double> lambdas = {5.0, 10.0, 20.0};
  double ranker_l2 = 1e-3;
  std::filesystem::path output_dir = "out";
  int threads = 0;  // 0 = DSLOSS_THREADS env var, else hardware count
};

// The 26-factor grid used when a config does not list factors:
// {2, 5, 10, 15, ..., 95, 100, 200, 300, 400, 500, 1000}.
std::vector<int> default_factors();

// Parses a JSON config document; unknown keys are rejected. See
// load_config for the file variant.
WorkflowConfig parse_config(const std::string& text);
WorkflowConfig load_config(const std::filesystem::path& path);

// Normalizes (sorts factors, applies defaults) and checks invariants;
// throws ConfigError on violations. Every cmd_* entry point calls this.
void validate_config(WorkflowConfig& config);

// JSON document describing the resolved config, byte-stable for identical
// configs; written as the config.json artifact.
std::string config_to_json(const WorkflowConfig& config);

// ---------------------------------------------------------------------------
// Workflow outputs
// ---------------------------------------------------------------------------

struct AlgorithmStats {
  FriedmanResult friedman;
  double critical_difference = 0.0;
  std::optional<int> critical_factor;
};

// Everything cmd_run computes, kept in memory so tests can assert on the
// numbers without parsing artifacts.
struct WorkflowResult {
  std::vector<DownsampleConfig> grid;            // algorithm-major, factor asc
  std::vector<ConfigMetricSummary> summaries;    // one per grid cell
  ConfigEvaluation original;                     // untouched segments
  std::vector<ConfigEvaluation> evaluations;     // one per grid cell
  RankerModel ranker;                            // full-data fit
  RankEvaluation rank_eval;
  std::vector<RankedConfig> predicted_ranking;
  std::map<std::string, AlgorithmStats> per_algorithm;  // keyed by name
  std::map<std::string, double> jaccard;         // config id (or Original)
  std::vector<ParetoPoint> pareto_points;        // marked, incl. Original
  std::vector<std::string> point_ids;            // row order of the geometry
  std::vector<std::vector<double>> importance_vectors;  // same order
  ClusterResult clusters;   // empty assignment when too few points
  MdsResult mds;            // empty embedding when too few points
  std::vector<Polyline> trajectories;
  std::vector<std::string> class_names;  // dataset class order
  double original_extraction_s = 0.0;    // mean per-segment wall time
};

// Builds the dataset a config describes (synthetic or loaded) and cuts it
// into classification segments.
LabeledDataset build_segments(const WorkflowConfig& config);

// Runs downsampling, metrics, cross-validation, ranking and the analysis
// suite. Deterministic for a fixed (config, seed) except for measured
// wall times.
WorkflowResult run_workflow(const WorkflowConfig& config);

// Writes every artifact plus manifest.json into config.output_dir.
// Returns the manifest path. Deterministic files (CSV/JSON reports) and
// timing-dependent files (anything holding measured seconds) are listed
// in separate manifest groups, so reruns can be compared on the
// deterministic group alone.
std::filesystem::path write_artifacts(const WorkflowResult& result,
                                      const WorkflowConfig& config);

// "deterministic_digest" field of a manifest: combined hash of the
// deterministic-group file hashes.
std::string manifest_deterministic_digest(const std::filesystem::path& manifest_path);

// cmd_run = run_workflow + write_artifacts.
std::filesystem::path cmd_run(WorkflowConfig config);

// ---------------------------------------------------------------------------
// Bench
// ---------------------------------------------------------------------------

struct BenchRow {
  DownsampleConfig config;
  double t_orig_s = 0.0;  // median feature-extraction time, original segment
  double t_ds_s = 0.0;    // same for the downsampled segment
  double s = 0.0;         // t_orig_s / t_ds_s
};

// Isolated single-threaded timing protocol on the first segment of the
// dataset: per config, 3 discarded warmup extractions then the median of
// 5 timed ones. One row per grid cell.
std::vector<BenchRow> run_bench(const WorkflowConfig& config);

// Writes bench.csv into config.output_dir and returns its path.
std::filesystem::path cmd_bench(WorkflowConfig config);

// ---------------------------------------------------------------------------
// Independent steps
// ---------------------------------------------------------------------------

// Generates the synthetic dataset and saves it in raw-f64le layout under
// config.output_dir / "dataset"; returns the manifest path of the saved
// dataset.
std::filesystem::path cmd_synth(WorkflowConfig config);

// Computes only the per-config metric summaries and writes
// metric_summaries.csv into config.output_dir.
std::filesystem::path cmd_metrics(WorkflowConfig config);

// Re-runs ranking from a prior artifact directory (metric_summaries.csv
// + cv_summary.csv) and rewrites ranking.csv / ranker.json there.
std::filesystem::path cmd_rank(const std::filesystem::path& artifact_dir,
                               const std::vector<double>& lambdas, int folds,
                               double l2, std::uint64_t seed);

// Renders every SVG plot from a prior artifact directory and adds the
// files to its manifest. Returns the list of written SVG paths.
std::vector<std::filesystem::path> cmd_plot(const std::filesystem::path& artifact_dir);

}  // namespace dsloss
