#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace wflo::svg {

struct Box {
  std::string label;
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

std::string boxplot(const std::string& title, const std::string& y_label, const std::vector<Box>& boxes);

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
  std::optional<std::pair<double, double>> fit;  // (slope, intercept) in log-log space
};

/// Log-log scatter with optional fitted lines.
std::string loglog(const std::string& title, const std::vector<Series>& series);

/// Cell colors scale over the present values; empty cells are left white.
std::string heatmap(const std::string& title, const std::vector<std::vector<std::optional<double>>>& cells);

/// Scalar field with marker circles at (col, row) fractional positions.
std::string field(const std::string& title, const Eigen::MatrixXd& values,
                  const std::vector<std::pair<double, double>>& markers);

/// Two stacked panels sharing the x axis.
std::string two_panel(const std::string& title, const std::string& x_label,
                      const std::vector<double>& x, const std::string& top_label,
                      const std::vector<double>& top, const std::string& bottom_label,
                      const std::vector<double>& bottom);

}  // namespace wflo::svg
