#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pfrlab/ptm.hpp"

namespace pfrlab::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool dashed = false;
};

// Simple line chart; y may be drawn on a log axis (values clamped to a
// positive floor first). Output is deterministic.
std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label,
                       const std::vector<Series>& series, bool log_y);

// 4x4 matrix as a signed heatmap (blue negative, red positive) with the
// numeric value printed in each cell.
std::string heatmap4(const std::string& title, const Ptm& m);

// Grouped bars: one group per category, one bar per series.
std::string bar_chart(const std::string& title,
                      const std::vector<std::string>& categories,
                      const std::vector<Series>& series, bool log_y);

void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace pfrlab::svg
