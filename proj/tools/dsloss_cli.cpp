#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dsloss/error.hpp"
#include "dsloss/workflow.hpp"

namespace {

using dsloss::WorkflowConfig;

// Flag overrides applied on top of the config file; absent flags leave
// the file (or default) values untouched.
struct Overrides {
  std::string config_path;
  std::string output_dir;
  bool has_seed = false;
  std::uint64_t seed = 0;
  bool has_threads = false;
  int threads = 0;
};

WorkflowConfig resolve_config(const Overrides& o) {
  WorkflowConfig config;
  if (!o.config_path.empty()) config = dsloss::load_config(o.config_path);
  if (!o.output_dir.empty()) config.output_dir = o.output_dir;
  if (o.has_seed) config.seed = o.seed;
  if (o.has_threads) config.threads = o.threads;
  return config;
}

void add_common_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config_path,
                  "JSON config file (defaults apply when omitted)")
      ->check(CLI::ExistingFile);
  cmd->add_option("-o,--out", o.output_dir, "output directory (overrides config)");
  cmd->add_option("-s,--seed", o.seed, "base seed (overrides config)")
      ->each([&o](const std::string&) { o.has_seed = true; });
  cmd->add_option("-t,--threads", o.threads,
                  "worker threads; 0 = DSLOSS_THREADS env var, else all cores")
      ->each([&o](const std::string&) { o.has_threads = true; });
}

int dispatch(const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const dsloss::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const dsloss::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Quantifies the information lost by time-series downsampling: "
      "distortion metrics, classification impact, metric-based ranking "
      "and trade-off analysis."};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "print help for every subcommand");

  Overrides run_o, synth_o, metrics_o, bench_o;

  CLI::App* run = app.add_subcommand(
      "run", "full workflow: downsample grid, metrics, classification, "
             "ranking, analysis and artifacts");
  add_common_flags(run, run_o);

  CLI::App* synth = app.add_subcommand(
      "synth", "generate the synthetic dataset and save it under <out>/dataset");
  add_common_flags(synth, synth_o);

  CLI::App* metrics = app.add_subcommand(
      "metrics", "compute only metric_summaries.csv for the config's grid");
  add_common_flags(metrics, metrics_o);

  CLI::App* bench = app.add_subcommand(
      "bench", "isolated single-threaded feature-extraction timing per grid cell");
  add_common_flags(bench, bench_o);

  std::string rank_dir;
  std::vector<double> rank_lambdas = {5.0, 10.0, 20.0};
  int rank_folds = 5;
  double rank_l2 = 1e-3;
  std::uint64_t rank_seed = 42;
  CLI::App* rank = app.add_subcommand(
      "rank", "re-rank configurations from a prior artifact directory");
  rank->add_option("artifacts", rank_dir, "artifact directory from a previous run")
      ->required()
      ->check(CLI::ExistingDirectory);
  rank->add_option("--lambda", rank_lambdas, "top-weighting lambdas");
  rank->add_option("--folds", rank_folds, "config-level evaluation folds");
  rank->add_option("--l2", rank_l2, "ranker L2 regularization");
  rank->add_option("-s,--seed", rank_seed, "base seed");

  std::string plot_dir;
  CLI::App* plot = app.add_subcommand(
      "plot", "render the SVG charts from a prior artifact directory");
  plot->add_option("artifacts", plot_dir, "artifact directory from a previous run")
      ->required()
      ->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (run->parsed()) {
    return dispatch([&] {
      WorkflowConfig config = resolve_config(run_o);
      dsloss::validate_config(config);
      const dsloss::WorkflowResult result = dsloss::run_workflow(config);
      const std::filesystem::path manifest =
          dsloss::write_artifacts(result, config);
      std::cout << "configs evaluated: " << result.grid.size() << " + Original\n";
      std::cout << "original accuracy: " << result.original.cv.mean_accuracy
                << "\n";
      std::cout << "ranking kendall tau: " << result.rank_eval.kendall_tau
                << " over " << result.rank_eval.n_pairs << " pairs\n";
      for (std::size_t i = 0; i < result.predicted_ranking.size() && i < 3; ++i) {
        std::cout << "predicted #" << i + 1 << ": "
                  << result.predicted_ranking[i].config.id() << "\n";
      }
      std::cout << "artifacts: " << manifest.string() << "\n";
    });
  }
  if (synth->parsed()) {
    return dispatch([&] {
      std::cout << "dataset: " << dsloss::cmd_synth(resolve_config(synth_o)).string()
                << "\n";
    });
  }
  if (metrics->parsed()) {
    return dispatch([&] {
      std::cout << "metrics: "
                << dsloss::cmd_metrics(resolve_config(metrics_o)).string() << "\n";
    });
  }
  if (bench->parsed()) {
    return dispatch([&] {
      std::cout << "bench: " << dsloss::cmd_bench(resolve_config(bench_o)).string()
                << "\n";
    });
  }
  if (rank->parsed()) {
    return dispatch([&] {
      std::cout << "ranking: "
                << dsloss::cmd_rank(rank_dir, rank_lambdas, rank_folds, rank_l2,
                                    rank_seed)
                       .string()
                << "\n";
    });
  }
  if (plot->parsed()) {
    return dispatch([&] {
      for (const auto& p : dsloss::cmd_plot(plot_dir)) {
        std::cout << "plot: " << p.string() << "\n";
      }
    });
  }
  return 2;  // unreachable: a subcommand is required
}
