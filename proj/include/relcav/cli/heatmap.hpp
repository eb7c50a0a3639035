#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "relcav/cli/sweep.hpp"

namespace relcav::cli {

struct HeatmapLabels {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::string colorbar_label;
  std::string comment;  // embedded as an XML comment
};

/// Self-contained SVG: one cell per matrix entry (rows along y, upward), a
/// colorbar and axis labels. NaN cells are grey. Output is a pure function of
/// the inputs.
std::string heatmap_svg(const Eigen::MatrixXd& values, const std::vector<double>& y, const std::vector<double>& x,
                        const HeatmapLabels& labels);

/// Heatmap of nu~(1)_N over (tau, t).
void render_heatmap(const SweepResult& res, const std::filesystem::path& path);

}  // namespace relcav::cli
