#include "dsloss/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dsloss/error.hpp"
#include "dsloss/format.hpp"

namespace dsloss {

namespace {

constexpr double kWidth = 820.0;
constexpr double kHeight = 540.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 190.0;  // room for the legend
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;
constexpr double kPlotW = kWidth - kLeft - kRight;
constexpr double kPlotH = kHeight - kTop - kBottom;

const char* kPalette[8] = {"#1b6ca8", "#d1495b", "#2e933c", "#8f2d56",
                           "#e08d18", "#20639b", "#5f0f40", "#3c887e"};

std::string xy(double x, double y) {
  return format_fixed(x, 2) + "," + format_fixed(y, 2);
}

std::string open_svg(const std::string& title) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                  format_fixed(kWidth, 0) + "\" height=\"" + format_fixed(kHeight, 0) +
                  "\" viewBox=\"0 0 " + format_fixed(kWidth, 0) + " " +
                  format_fixed(kHeight, 0) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + format_fixed(kWidth / 2, 0) +
       "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"16\">" +
       title + "</text>\n";
  return s;
}

std::string text_at(double x, double y, const std::string& t,
                    const std::string& anchor = "middle", int size = 11) {
  return "<text x=\"" + format_fixed(x, 2) + "\" y=\"" + format_fixed(y, 2) +
         "\" text-anchor=\"" + anchor +
         "\" font-family=\"sans-serif\" font-size=\"" + std::to_string(size) +
         "\">" + t + "</text>\n";
}

std::string axes_frame() {
  return "<rect x=\"" + format_fixed(kLeft, 1) + "\" y=\"" + format_fixed(kTop, 1) +
         "\" width=\"" + format_fixed(kPlotW, 1) + "\" height=\"" +
         format_fixed(kPlotH, 1) + "\" fill=\"none\" stroke=\"#444\"/>\n";
}

// Five-pointed star path centred at (cx, cy).
std::string star_path(double cx, double cy, double r, const std::string& fill) {
  std::string d;
  for (int i = 0; i < 10; ++i) {
    const double radius = i % 2 == 0 ? r : 0.45 * r;
    const double angle = -1.5707963267948966 + i * 0.6283185307179586;
    const double x = cx + radius * std::cos(angle);
    const double y = cy + radius * std::sin(angle);
    d += (i == 0 ? "M" : "L") + xy(x, y);
  }
  d += "Z";
  return "<path class=\"critical-star\" d=\"" + d + "\" fill=\"" + fill +
         "\" stroke=\"#222\" stroke-width=\"0.6\"/>\n";
}

// Shared log-x scaling with decade ticks.
struct LogAxis {
  double lo = 0.0;  // log10 of the data minimum
  double hi = 1.0;

  double x(double value) const {
    const double t = (std::log10(value) - lo) / (hi - lo);
    return kLeft + t * kPlotW;
  }
};

LogAxis make_log_axis(double min_value, double max_value) {
  LogAxis ax;
  ax.lo = std::floor(std::log10(min_value) * 10.0) / 10.0;
  ax.hi = std::ceil(std::log10(max_value) * 10.0) / 10.0;
  if (ax.hi - ax.lo < 0.1) {
    ax.lo -= 0.5;
    ax.hi += 0.5;
  }
  return ax;
}

std::string log_axis_ticks(const LogAxis& ax, const std::string& unit) {
  std::string s;
  const int first = static_cast<int>(std::ceil(ax.lo));
  const int last = static_cast<int>(std::floor(ax.hi));
  for (int e = first; e <= last; ++e) {
    const double value = std::pow(10.0, e);
    const double x = ax.x(value);
    s += "<line x1=\"" + format_fixed(x, 2) + "\" y1=\"" +
         format_fixed(kTop + kPlotH, 2) + "\" x2=\"" + format_fixed(x, 2) +
         "\" y2=\"" + format_fixed(kTop + kPlotH + 5, 2) + "\" stroke=\"#444\"/>\n";
    std::string label;
    if (e >= 0) {
      label = format_fixed(value, 0);
    } else {
      label = format_double(value);
    }
    s += text_at(x, kTop + kPlotH + 20, label + unit);
  }
  return s;
}

double accuracy_y(double accuracy, double y_lo, double y_hi) {
  const double t = (accuracy - y_lo) / (y_hi - y_lo);
  return kTop + (1.0 - t) * kPlotH;
}

std::string accuracy_ticks(double y_lo, double y_hi) {
  std::string s;
  for (int i = 0; i <= 5; ++i) {
    const double v = y_lo + (y_hi - y_lo) * i / 5.0;
    const double y = accuracy_y(v, y_lo, y_hi);
    s += "<line x1=\"" + format_fixed(kLeft - 5, 2) + "\" y1=\"" +
         format_fixed(y, 2) + "\" x2=\"" + format_fixed(kLeft, 2) + "\" y2=\"" +
         format_fixed(y, 2) + "\" stroke=\"#444\"/>\n";
    s += text_at(kLeft - 10, y + 4, format_fixed(v, 2), "end");
  }
  return s;
}

std::string legend_entry(double y, const std::string& color, const std::string& label) {
  std::string s = "<line x1=\"" + format_fixed(kWidth - kRight + 20, 1) + "\" y1=\"" +
                  format_fixed(y, 1) + "\" x2=\"" +
                  format_fixed(kWidth - kRight + 50, 1) + "\" y2=\"" +
                  format_fixed(y, 1) + "\" stroke=\"" + color +
                  "\" stroke-width=\"2\"/>\n";
  s += text_at(kWidth - kRight + 58, y + 4, label, "start");
  return s;
}

}  // namespace

std::string svg_accuracy_chart(const std::vector<AccuracySeries>& series,
                               double original_mean, double original_std) {
  if (series.empty()) throw DataError("svg_accuracy_chart: no series");
  double min_factor = std::numeric_limits<double>::infinity();
  double max_factor = 0.0;
  double min_acc = original_mean - original_std;
  double max_acc = original_mean + original_std;
  for (const AccuracySeries& s : series) {
    if (s.points.empty()) {
      throw DataError("svg_accuracy_chart: empty series " + s.algorithm);
    }
    for (const auto& [factor, acc] : s.points) {
      min_factor = std::min(min_factor, static_cast<double>(factor));
      max_factor = std::max(max_factor, static_cast<double>(factor));
      min_acc = std::min(min_acc, acc);
      max_acc = std::max(max_acc, acc);
    }
  }
  const double y_lo = std::max(0.0, min_acc - 0.05);
  const double y_hi = std::min(1.05, max_acc + 0.05);
  const LogAxis ax = make_log_axis(min_factor, std::max(max_factor, min_factor + 1));

  std::string svg = open_svg("Accuracy vs downsampling factor");
  // Original reference: shaded +-std band around a dashed mean line.
  const double band_top = accuracy_y(std::min(y_hi, original_mean + original_std), y_lo, y_hi);
  const double band_bot = accuracy_y(std::max(y_lo, original_mean - original_std), y_lo, y_hi);
  svg += "<rect class=\"original-band\" x=\"" + format_fixed(kLeft, 1) + "\" y=\"" +
         format_fixed(band_top, 2) + "\" width=\"" + format_fixed(kPlotW, 1) +
         "\" height=\"" + format_fixed(std::max(band_bot - band_top, 0.5), 2) +
         "\" fill=\"#bbbbbb\" fill-opacity=\"0.35\"/>\n";
  const double mean_y = accuracy_y(original_mean, y_lo, y_hi);
  svg += "<line class=\"original-mean\" x1=\"" + format_fixed(kLeft, 1) + "\" y1=\"" +
         format_fixed(mean_y, 2) + "\" x2=\"" + format_fixed(kLeft + kPlotW, 1) +
         "\" y2=\"" + format_fixed(mean_y, 2) +
         "\" stroke=\"#333\" stroke-dasharray=\"6,4\"/>\n";

  std::size_t color_idx = 0;
  std::string overlays;
  double legend_y = kTop + 10;
  for (const AccuracySeries& s : series) {
    const std::string color = kPalette[color_idx % 8];
    ++color_idx;
    std::vector<std::pair<int, double>> pts = s.points;
    std::sort(pts.begin(), pts.end());
    std::string poly;
    for (const auto& [factor, acc] : pts) {
      if (!poly.empty()) poly += " ";
      poly += xy(ax.x(factor), accuracy_y(acc, y_lo, y_hi));
    }
    svg += "<polyline class=\"series\" data-algorithm=\"" + s.algorithm +
           "\" points=\"" + poly + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    for (const auto& [factor, acc] : pts) {
      svg += "<circle cx=\"" + format_fixed(ax.x(factor), 2) + "\" cy=\"" +
             format_fixed(accuracy_y(acc, y_lo, y_hi), 2) + "\" r=\"3\" fill=\"" +
             color + "\"/>\n";
    }
    if (s.critical_factor) {
      const auto hit = std::find_if(
          pts.begin(), pts.end(),
          [&](const auto& p) { return p.first == *s.critical_factor; });
      const double star_y = hit != pts.end()
                                ? accuracy_y(hit->second, y_lo, y_hi) - 14.0
                                : kTop + 14.0;
      overlays += star_path(ax.x(*s.critical_factor), star_y, 9.0, color);
    }
    svg += legend_entry(legend_y, color, s.algorithm);
    legend_y += 18;
  }
  svg += legend_entry(legend_y, "#333", "Original");
  svg += overlays;
  svg += axes_frame();
  svg += log_axis_ticks(ax, "");
  svg += accuracy_ticks(y_lo, y_hi);
  svg += text_at(kLeft + kPlotW / 2, kHeight - 14, "downsampling factor (log)");
  svg += text_at(16, kTop + kPlotH / 2, "accuracy", "middle");
  svg += "</svg>\n";
  return svg;
}

std::string svg_class_heat(const std::vector<std::string>& row_labels,
                           const std::vector<std::string>& class_names,
                           const std::vector<std::vector<double>>& sensitivity) {
  if (row_labels.empty() || class_names.empty()) {
    throw DataError("svg_class_heat: empty grid");
  }
  if (sensitivity.size() != row_labels.size()) {
    throw DataError("svg_class_heat: one sensitivity row per label required");
  }
  for (const auto& row : sensitivity) {
    if (row.size() != class_names.size()) {
      throw DataError("svg_class_heat: sensitivity row width mismatch");
    }
  }
  const double grid_left = 170.0;
  const double grid_top = 60.0;
  const double cell_w =
      std::min(90.0, (kWidth - grid_left - 40.0) / static_cast<double>(class_names.size()));
  const double cell_h = std::min(
      22.0, (kHeight - grid_top - 30.0) / static_cast<double>(row_labels.size()));

  std::string svg = open_svg("Per-class sensitivity");
  for (std::size_t c = 0; c < class_names.size(); ++c) {
    svg += text_at(grid_left + (c + 0.5) * cell_w, grid_top - 8, class_names[c]);
  }
  for (std::size_t r = 0; r < row_labels.size(); ++r) {
    svg += text_at(grid_left - 8, grid_top + (r + 0.7) * cell_h, row_labels[r], "end",
                   10);
    for (std::size_t c = 0; c < class_names.size(); ++c) {
      const double v = std::clamp(sensitivity[r][c], 0.0, 1.0);
      // Dark blue (low) to warm yellow (high).
      const int red = static_cast<int>(20 + 235 * v);
      const int green = static_cast<int>(30 + 190 * v);
      const int blue = static_cast<int>(120 - 60 * v);
      svg += "<rect class=\"heat-cell\" data-value=\"" + format_fixed(v, 3) +
             "\" x=\"" + format_fixed(grid_left + c * cell_w, 2) + "\" y=\"" +
             format_fixed(grid_top + r * cell_h, 2) + "\" width=\"" +
             format_fixed(cell_w - 1, 2) + "\" height=\"" + format_fixed(cell_h - 1, 2) +
             "\" fill=\"rgb(" + std::to_string(red) + "," + std::to_string(green) +
             "," + std::to_string(blue) + ")\"/>\n";
    }
  }
  svg += "</svg>\n";
  return svg;
}

std::string svg_pareto(const std::vector<ParetoMark>& marks) {
  if (marks.empty()) throw DataError("svg_pareto: no points");
  double min_t = std::numeric_limits<double>::infinity();
  double max_t = 0.0;
  double min_a = 1.0;
  double max_a = 0.0;
  for (const ParetoMark& m : marks) {
    if (!(m.time_s > 0.0)) throw DataError("svg_pareto: non-positive time");
    min_t = std::min(min_t, m.time_s);
    max_t = std::max(max_t, m.time_s);
    min_a = std::min(min_a, m.accuracy);
    max_a = std::max(max_a, m.accuracy);
  }
  const LogAxis ax = make_log_axis(min_t, max_t);
  const double y_lo = std::max(0.0, min_a - 0.05);
  const double y_hi = std::min(1.05, max_a + 0.05);

  std::string svg = open_svg("Extraction time vs accuracy");
  svg += axes_frame();
  svg += log_axis_ticks(ax, "s");
  svg += accuracy_ticks(y_lo, y_hi);
  // Draw the front polyline beneath the markers.
  std::vector<const ParetoMark*> front;
  for (const ParetoMark& m : marks) {
    if (!m.dominated) front.push_back(&m);
  }
  std::sort(front.begin(), front.end(), [](const ParetoMark* a, const ParetoMark* b) {
    return a->time_s < b->time_s;
  });
  if (front.size() > 1) {
    std::string poly;
    for (const ParetoMark* m : front) {
      if (!poly.empty()) poly += " ";
      poly += xy(ax.x(m->time_s), accuracy_y(m->accuracy, y_lo, y_hi));
    }
    svg += "<polyline class=\"front-line\" points=\"" + poly +
           "\" fill=\"none\" stroke=\"#2e933c\" stroke-dasharray=\"3,3\"/>\n";
  }
  for (const ParetoMark& m : marks) {
    const double x = ax.x(m.time_s);
    const double y = accuracy_y(m.accuracy, y_lo, y_hi);
    if (m.is_original) {
      svg += "<circle class=\"original-ring\" cx=\"" + format_fixed(x, 2) +
             "\" cy=\"" + format_fixed(y, 2) +
             "\" r=\"9\" fill=\"none\" stroke=\"#111\" stroke-width=\"1.5\"/>\n";
    }
    if (m.dominated) {
      svg += "<circle class=\"dominated\" cx=\"" + format_fixed(x, 2) + "\" cy=\"" +
             format_fixed(y, 2) +
             "\" r=\"4\" fill=\"white\" stroke=\"#888\" stroke-width=\"1.2\"/>\n";
    } else {
      svg += "<circle class=\"front\" cx=\"" + format_fixed(x, 2) + "\" cy=\"" +
             format_fixed(y, 2) + "\" r=\"4.5\" fill=\"#2e933c\"/>\n";
    }
  }
  svg += text_at(kLeft + kPlotW / 2, kHeight - 14, "feature extraction time (log)");
  svg += text_at(16, kTop + kPlotH / 2, "accuracy");
  svg += "</svg>\n";
  return svg;
}

std::string svg_trajectories(const std::vector<Polyline>& lines) {
  if (lines.empty()) throw DataError("svg_trajectories: no polylines");
  double min_x = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();
  for (const Polyline& line : lines) {
    if (line.vertices.empty()) {
      throw DataError("svg_trajectories: polyline without vertices");
    }
    for (const auto& v : line.vertices) {
      if (v.size() < 2) throw DataError("svg_trajectories: vertex needs 2 coordinates");
      min_x = std::min(min_x, v[0]);
      max_x = std::max(max_x, v[0]);
      min_y = std::min(min_y, v[1]);
      max_y = std::max(max_y, v[1]);
    }
  }
  const double span_x = max_x - min_x > 0 ? max_x - min_x : 1.0;
  const double span_y = max_y - min_y > 0 ? max_y - min_y : 1.0;
  const auto px = [&](double v) { return kLeft + (v - min_x) / span_x * kPlotW; };
  const auto py = [&](double v) { return kTop + (1.0 - (v - min_y) / span_y) * kPlotH; };

  std::string svg = open_svg("Feature-importance trajectories");
  svg += axes_frame();
  std::size_t color_idx = 0;
  double legend_y = kTop + 10;
  for (const Polyline& line : lines) {
    const std::string color = kPalette[color_idx % 8];
    ++color_idx;
    std::string poly;
    for (const auto& v : line.vertices) {
      if (!poly.empty()) poly += " ";
      poly += xy(px(v[0]), py(v[1]));
    }
    svg += "<polyline class=\"trajectory\" data-algorithm=\"" + line.algorithm +
           "\" points=\"" + poly + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.8\"/>\n";
    // Start marker on the Original vertex.
    svg += "<circle class=\"start\" cx=\"" + format_fixed(px(line.vertices[0][0]), 2) +
           "\" cy=\"" + format_fixed(py(line.vertices[0][1]), 2) +
           "\" r=\"5\" fill=\"#111\"/>\n";
    for (std::size_t i = 1; i < line.vertices.size(); ++i) {
      svg += "<circle cx=\"" + format_fixed(px(line.vertices[i][0]), 2) + "\" cy=\"" +
             format_fixed(py(line.vertices[i][1]), 2) + "\" r=\"2.5\" fill=\"" + color +
             "\"/>\n";
    }
    svg += legend_entry(legend_y, color,
                        line.algorithm + " (fold " + std::to_string(line.fold) + ")");
    legend_y += 18;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace dsloss
