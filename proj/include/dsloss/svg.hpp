#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dsloss/analysis.hpp"

namespace dsloss {

// Pure SVG builders: data in, complete SVG document out. No timestamps,
// no randomness — identical inputs give identical bytes.

// One algorithm's accuracy curve over downsampling factors.
struct AccuracySeries {
  std::string algorithm;
  std::vector<std::pair<int, double>> points;  // (factor, mean accuracy)
  std::optional<int> critical_factor;          // starred when present
};

// Line chart of accuracy vs factor (log-x). The original accuracy is
// drawn as a dashed horizontal line inside a +-std shaded band; critical
// factors are marked with a star on their series.
std::string svg_accuracy_chart(const std::vector<AccuracySeries>& series,
                               double original_mean, double original_std);

// Heat grid of per-class sensitivity: one row per configuration, one
// column per class, cell brightness = sensitivity in [0, 1].
std::string svg_class_heat(const std::vector<std::string>& row_labels,
                           const std::vector<std::string>& class_names,
                           const std::vector<std::vector<double>>& sensitivity);

struct ParetoMark {
  std::string label;
  double time_s = 0.0;
  double accuracy = 0.0;
  bool dominated = false;
  bool is_original = false;
};

// Scatter of extraction time (log axis) vs accuracy; non-dominated points
// are filled ("front" class), dominated ones hollow, the original ringed.
std::string svg_pareto(const std::vector<ParetoMark>& marks);

// Feature-space trajectories: one polyline per algorithm/fold through the
// embedded points, with a marker on the shared start (Original) vertex.
// Only the first two embedding coordinates are drawn.
std::string svg_trajectories(const std::vector<Polyline>& lines);

}  // namespace dsloss
