#include "dsloss/workflow.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "dsloss/error.hpp"
#include "dsloss/sha256.hpp"

using namespace dsloss;

namespace {

namespace fs = std::filesystem;

WorkflowConfig tiny_config(const fs::path& out_dir) {
  WorkflowConfig c;
  c.dataset.synth.signals_per_class = 5;
  c.dataset.synth.duration_s = 2.0;
  c.dataset.synth.sample_rate_hz = 1000.0;
  // Noisy on purpose: accuracies must differ across configurations so the
  // pairwise ranking stage has non-tied pairs to learn from.
  c.dataset.synth.noise_std = 0.5;
  c.segment_seconds = 1.0;
  c.algorithms = {Algorithm::Decimate, Algorithm::Lttb};
  c.factors = {2, 5, 10, 20};
  c.folds = 3;
  c.seed = 7;
  c.lambdas = {5.0};
  c.output_dir = out_dir;
  c.threads = 2;
  return c;
}

fs::path scratch_dir(const std::string& leaf) {
  const fs::path dir = fs::temp_directory_path() / "dsloss_workflow_tests" / leaf;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// One shared end-to-end run: computing it once keeps the suite fast.
struct SharedRun {
  WorkflowConfig config;
  WorkflowResult result;
  fs::path artifact_dir;
};

const SharedRun& shared_run() {
  static const SharedRun run = [] {
    SharedRun r;
    r.artifact_dir = scratch_dir("shared");
    r.config = tiny_config(r.artifact_dir);
    validate_config(r.config);
    r.result = run_workflow(r.config);
    write_artifacts(r.result, r.config);
    return r;
  }();
  return run;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("default factor grid spans 2 to 1000 with 26 entries") {
  const std::vector<int> f = default_factors();
  CHECK(f.size() == 26);
  CHECK(f.front() == 2);
  CHECK(f[1] == 5);
  CHECK(f[20] == 100);
  CHECK(f.back() == 1000);
  CHECK(std::is_sorted(f.begin(), f.end()));
}

TEST_CASE("parse_config applies defaults for an empty document") {
  WorkflowConfig c = parse_config("{}");
  CHECK(c.dataset.is_synth);
  CHECK(c.dataset.synth.signals_per_class == 12);
  CHECK(c.algorithms.size() == 5);
  CHECK(c.factors.empty());
  CHECK(c.preselect_ratio == 4);
  CHECK(c.segment_seconds == 2.0);
  CHECK(c.folds == 5);
  CHECK(c.seed == 42);
  CHECK(c.lambdas == std::vector<double>{5.0, 10.0, 20.0});
  CHECK(c.ranker_l2 == 1e-3);
  validate_config(c);
  CHECK(c.factors == default_factors());
}

TEST_CASE("parse_config reads every field and rejects malformed input") {
  const std::string text = R"({
    "dataset": {"synth": {"signals_per_class": 6, "duration_s": 3.0,
                           "sample_rate_hz": 1000.0, "noise_std": 0.1}},
    "algorithms": ["decimate", "lttb"],
    "factors": [10, 2, 10],
    "preselect_ratio": 8,
    "segment_seconds": 1.5,
    "folds": 4,
    "seed": 99,
    "lambdas": [2.5],
    "ranker_l2": 0.01,
    "output_dir": "artifacts",
    "threads": 3
  })";
  WorkflowConfig c = parse_config(text);
  CHECK(c.dataset.synth.signals_per_class == 6);
  CHECK(c.dataset.synth.sample_rate_hz == 1000.0);
  CHECK(c.algorithms == std::vector<Algorithm>{Algorithm::Decimate, Algorithm::Lttb});
  CHECK(c.preselect_ratio == 8);
  CHECK(c.folds == 4);
  CHECK(c.seed == 99);
  CHECK(c.output_dir == fs::path("artifacts"));
  CHECK(c.threads == 3);
  validate_config(c);
  CHECK(c.factors == std::vector<int>{2, 10});  // sorted, deduplicated

  CHECK_THROWS_AS(parse_config("not json"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"факторы": []})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"folds": "five"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"dataset": {"synth": {}, "path": "x.csv"}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"dataset": {}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"dataset": {"synth": {"sr": 1}}})"), ConfigError);
}

TEST_CASE("validate_config enforces invariants") {
  const auto broken = [](auto mutate) {
    WorkflowConfig c = tiny_config("unused");
    mutate(c);
    CHECK_THROWS_AS(validate_config(c), ConfigError);
  };
  broken([](WorkflowConfig& c) { c.folds = 1; });
  broken([](WorkflowConfig& c) { c.factors = {0}; });
  broken([](WorkflowConfig& c) { c.algorithms.clear(); });
  broken([](WorkflowConfig& c) {
    c.algorithms = {Algorithm::Decimate, Algorithm::Decimate};
  });
  broken([](WorkflowConfig& c) { c.preselect_ratio = 0; });
  broken([](WorkflowConfig& c) { c.segment_seconds = 0.0; });
  broken([](WorkflowConfig& c) { c.lambdas = {-1.0}; });
  broken([](WorkflowConfig& c) { c.ranker_l2 = -0.5; });
  broken([](WorkflowConfig& c) { c.threads = -1; });
  broken([](WorkflowConfig& c) { c.dataset.synth.signals_per_class = 0; });
  broken([](WorkflowConfig& c) { c.dataset.synth.duration_s = 0.5; });
  broken([](WorkflowConfig& c) { c.dataset.synth.noise_std = -0.1; });
}

TEST_CASE("config_to_json roundtrips result-defining fields byte-stably") {
  WorkflowConfig c = tiny_config("somewhere");
  validate_config(c);
  const std::string doc = config_to_json(c);
  CHECK(doc == config_to_json(c));
  WorkflowConfig back = parse_config(doc);
  validate_config(back);
  CHECK(back.algorithms == c.algorithms);
  CHECK(back.factors == c.factors);
  CHECK(back.folds == c.folds);
  CHECK(back.seed == c.seed);
  CHECK(back.segment_seconds == c.segment_seconds);
  CHECK(back.lambdas == c.lambdas);
  CHECK(back.ranker_l2 == c.ranker_l2);
  CHECK(back.dataset.synth.sample_rate_hz == c.dataset.synth.sample_rate_hz);
  // Where artifacts land and how many threads run do not define results.
  CHECK(doc.find("output_dir") == std::string::npos);
  CHECK(doc.find("threads") == std::string::npos);
}

TEST_CASE("build_segments cuts the synthetic dataset into labeled segments") {
  WorkflowConfig c = tiny_config("unused");
  validate_config(c);
  const LabeledDataset segments = build_segments(c);
  CHECK(segments.size() == 30);  // 3 classes x 5 signals x 2 segments
  CHECK(segments.class_names.size() == 3);
  CHECK(segments.group_ids.size() == 30);
  const std::set<std::size_t> groups(segments.group_ids.begin(),
                                     segments.group_ids.end());
  CHECK(groups.size() == 15);  // one group per parent signal
  for (const Signal& s : segments.signals) CHECK(s.size() == 1000);
}

TEST_CASE("run_workflow produces a complete, internally consistent result") {
  const WorkflowResult& r = shared_run().result;
  REQUIRE(r.grid.size() == 8);
  REQUIRE(r.summaries.size() == 8);
  REQUIRE(r.evaluations.size() == 8);
  CHECK(r.class_names.size() == 3);

  CHECK(r.original.is_original);
  CHECK(r.original.cv.folds.size() == 3);
  CHECK(r.original.cv.mean_accuracy >= 0.0);
  CHECK(r.original.cv.mean_accuracy <= 1.0);
  for (const ConfigEvaluation& e : r.evaluations) {
    CHECK_FALSE(e.is_original);
    CHECK(e.cv.folds.size() == 3);
  }

  // Fold partitions must be shared across configurations: the same
  // validation-row count per fold everywhere.
  for (std::size_t f = 0; f < 3; ++f) {
    std::size_t orig_rows = 0;
    for (const auto& row : r.original.cv.folds[f].confusion) {
      for (std::size_t v : row) orig_rows += v;
    }
    for (const ConfigEvaluation& e : r.evaluations) {
      std::size_t rows = 0;
      for (const auto& row : e.cv.folds[f].confusion) {
        for (std::size_t v : row) rows += v;
      }
      CHECK(rows == orig_rows);
    }
  }

  CHECK(r.per_algorithm.size() == 2);
  for (const auto& [name, stats] : r.per_algorithm) {
    CHECK((name == "Decimate" || name == "LTTB"));
    CHECK(stats.friedman.p_value >= 0.0);
    CHECK(stats.friedman.p_value <= 1.0);
    CHECK(stats.critical_difference > 0.0);
  }

  CHECK(r.jaccard.size() == 9);
  for (const auto& [label, j] : r.jaccard) {
    CHECK(j >= 0.0);
    CHECK(j <= 1.0);
  }

  CHECK(r.rank_eval.n_pairs > 0);
  CHECK(r.predicted_ranking.size() == 8);
  CHECK(r.rank_eval.kendall_tau >= -1.0);
  CHECK(r.rank_eval.kendall_tau <= 1.0);

  REQUIRE(r.point_ids.size() == 9);
  CHECK(r.point_ids.front() == "Original");
  REQUIRE(r.importance_vectors.size() == 9);
  for (const auto& v : r.importance_vectors) CHECK(v.size() == 16);
  CHECK(r.clusters.assignment.size() == 9);
  CHECK(r.clusters.chosen_k >= 2);
  REQUIRE(r.mds.embedding.size() == 9);
  CHECK(r.mds.embedding.front().size() == 2);

  REQUIRE(r.trajectories.size() == 2);  // one per algorithm (single fold 0)
  for (const Polyline& line : r.trajectories) {
    CHECK(line.vertices.size() == 5);  // Original + 4 factors
  }

  REQUIRE(r.pareto_points.size() == 9);
  CHECK(r.pareto_points.front().is_original);
  bool any_front = false;
  for (const ParetoPoint& p : r.pareto_points) any_front |= !p.dominated;
  CHECK(any_front);
  CHECK(r.original_extraction_s > 0.0);
}

TEST_CASE("write_artifacts emits every file and a grouped manifest") {
  const fs::path& dir = shared_run().artifact_dir;
  const std::vector<std::string> deterministic = {
      "config.json",    "metric_summaries.csv", "evaluations.csv",
      "cv_summary.csv", "per_class.csv",        "importances.csv",
      "ranking.csv",    "ranker.json",          "friedman.csv",
      "clusters.csv",   "embedding.csv",        "analysis.json",
      "trajectories.json"};
  const std::vector<std::string> timing = {"timing.csv", "speedup.csv",
                                           "pareto.csv"};
  for (const std::string& name : deterministic) CHECK(fs::exists(dir / name));
  for (const std::string& name : timing) CHECK(fs::exists(dir / name));

  const std::string manifest = slurp(dir / "manifest.json");
  for (const std::string& name : deterministic) {
    CHECK(manifest.find("\"" + name + "\"") != std::string::npos);
  }
  const std::string digest = manifest_deterministic_digest(dir / "manifest.json");
  CHECK(digest.size() == 64);

  // Recorded hashes must match the files on disk.
  for (const std::string& name : deterministic) {
    CHECK(manifest.find(sha256_file_hex(dir / name)) != std::string::npos);
  }

  // Structural spot checks on the CSVs.
  CHECK(line_count(slurp(dir / "metric_summaries.csv")) == 9);  // header + 8
  CHECK(line_count(slurp(dir / "cv_summary.csv")) == 10);       // + Original
  CHECK(line_count(slurp(dir / "evaluations.csv")) == 28);      // 9 x 3 folds
  CHECK(line_count(slurp(dir / "ranking.csv")) == 9);
  CHECK(line_count(slurp(dir / "friedman.csv")) == 3);
  CHECK(line_count(slurp(dir / "importances.csv")) == 1 + 9 * 16);
  CHECK(line_count(slurp(dir / "speedup.csv")) == 9);
  CHECK(line_count(slurp(dir / "pareto.csv")) == 10);
  const std::string header = slurp(dir / "cv_summary.csv");
  CHECK(header.rfind("config,algorithm,factor,preselect_ratio,is_original,"
                     "mean_accuracy,std_accuracy,jaccard_stability\n",
                     0) == 0);
}

TEST_CASE("identical config and seed reproduce the deterministic artifacts") {
  const fs::path dir_a = scratch_dir("rerun_a");
  const fs::path dir_b = scratch_dir("rerun_b");
  WorkflowConfig config = tiny_config(dir_a);
  const fs::path manifest_a = cmd_run(config);
  config.output_dir = dir_b;
  config.threads = 1;  // thread count must not change results
  const fs::path manifest_b = cmd_run(config);
  CHECK(manifest_deterministic_digest(manifest_a) ==
        manifest_deterministic_digest(manifest_b));
  // Byte-level check on a few representative files.
  for (const std::string name :
       {"config.json", "cv_summary.csv", "ranking.csv", "embedding.csv"}) {
    CHECK(slurp(dir_a / name) == slurp(dir_b / name));
  }
  // A different seed must change the digest.
  const fs::path dir_c = scratch_dir("rerun_c");
  config.output_dir = dir_c;
  config.seed = 8;
  CHECK(manifest_deterministic_digest(cmd_run(config)) !=
        manifest_deterministic_digest(manifest_a));
}

TEST_CASE("cmd_rank recomputes the ranking from stored artifacts") {
  const SharedRun& run = shared_run();
  const fs::path dir = scratch_dir("rank_roundtrip");
  for (const auto& entry : fs::directory_iterator(run.artifact_dir)) {
    if (entry.is_regular_file()) {
      fs::copy_file(entry.path(), dir / entry.path().filename());
    }
  }
  const std::string before = slurp(dir / "ranking.csv");
  const fs::path out = cmd_rank(dir, run.config.lambdas, run.config.folds,
                                run.config.ranker_l2, run.config.seed);
  CHECK(out == dir / "ranking.csv");
  CHECK(slurp(out) == before);  // same inputs, same ranking bytes
  CHECK_THROWS_AS(cmd_rank(scratch_dir("rank_empty"), {5.0}, 3, 1e-3, 7),
                  DataError);
}

TEST_CASE("cmd_plot renders the four SVGs and extends the manifest") {
  const SharedRun& run = shared_run();
  const fs::path dir = scratch_dir("plot_roundtrip");
  for (const auto& entry : fs::directory_iterator(run.artifact_dir)) {
    if (entry.is_regular_file()) {
      fs::copy_file(entry.path(), dir / entry.path().filename());
    }
  }
  const std::vector<fs::path> written = cmd_plot(dir);
  REQUIRE(written.size() == 4);
  for (const fs::path& p : written) {
    CHECK(fs::exists(p));
    CHECK(slurp(p).rfind("<svg", 0) == 0);
  }
  const std::string manifest = slurp(dir / "manifest.json");
  CHECK(manifest.find("plots/accuracy_vs_factor.svg") != std::string::npos);
  CHECK(manifest.find("plots/class_heat.svg") != std::string::npos);
  CHECK(manifest.find("plots/pareto.svg") != std::string::npos);
  CHECK(manifest.find("plots/trajectories.svg") != std::string::npos);
  CHECK(manifest.find("\"plots\"") != std::string::npos);
  // The deterministic digest is untouched by plot generation.
  CHECK(manifest_deterministic_digest(dir / "manifest.json") ==
        manifest_deterministic_digest(run.artifact_dir / "manifest.json"));
  // Re-plotting replaces rather than duplicates the manifest entries.
  (void)cmd_plot(dir);
  const std::string again = slurp(dir / "manifest.json");
  CHECK(line_count(again) == line_count(manifest));

  // An artifact set with no trajectories is a hard error naming the file.
  std::ofstream(dir / "trajectories.json", std::ios::binary)
      << "{\n  \"lines\": []\n}\n";
  CHECK_THROWS_WITH_AS(cmd_plot(dir),
                       doctest::Contains("trajectories.json"), DataError);
}

TEST_CASE("cmd_bench times every grid cell on the first segment") {
  const fs::path dir = scratch_dir("bench");
  WorkflowConfig config = tiny_config(dir);
  config.factors = {2, 10};
  const std::vector<BenchRow> rows = run_bench(config);
  REQUIRE(rows.size() == 4);
  for (const BenchRow& row : rows) {
    CHECK(row.t_orig_s > 0.0);
    CHECK(row.t_ds_s > 0.0);
    CHECK(row.s > 0.0);
  }
  const fs::path csv = cmd_bench(config);
  CHECK(csv == dir / "bench.csv");
  CHECK(line_count(slurp(csv)) == 5);
}

TEST_CASE("cmd_synth saves a loadable raw dataset") {
  const fs::path dir = scratch_dir("synth");
  WorkflowConfig config = tiny_config(dir);
  const fs::path manifest = cmd_synth(config);
  CHECK(fs::exists(manifest));
  const LabeledDataset ds = load_dataset(dir / "dataset", DataFormat::RawF64le);
  CHECK(ds.size() == 15);  // 3 classes x 5 signals
  CHECK(ds.class_names.size() == 3);
  CHECK(ds.signals.front().sample_rate_hz == 1000.0);

  WorkflowConfig file_config = config;
  file_config.dataset.is_synth = false;
  file_config.dataset.path = "anything";
  CHECK_THROWS_AS(cmd_synth(file_config), ConfigError);
}

TEST_CASE("cmd_metrics writes only the metric summary table") {
  const fs::path dir = scratch_dir("metrics_only");
  WorkflowConfig config = tiny_config(dir);
  config.factors = {5};
  const fs::path csv = cmd_metrics(config);
  CHECK(csv == dir / "metric_summaries.csv");
  const std::string text = slurp(csv);
  CHECK(line_count(text) == 3);  // header + 2 algorithms x 1 factor
  CHECK(text.find("Decimate") != std::string::npos);
  CHECK(text.find("LTTB") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "manifest.json"));
}

TEST_CASE("a dataset too small to evaluate fails with a clear error") {
  WorkflowConfig config = tiny_config(scratch_dir("too_small"));
  config.dataset.synth.signals_per_class = 1;
  config.folds = 5;
  CHECK_THROWS_AS(run_workflow(config), DataError);
}
