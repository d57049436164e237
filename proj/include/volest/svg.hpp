#pragma once

#include <string>
#include <vector>

namespace volest::svg {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartSpec {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool log_x = false;
  bool log_y = false;
};

// Minimal self-contained SVG line chart; deterministic output.
void write_line_chart(const std::string& path, const ChartSpec& spec,
                      const std::vector<Series>& series);

}  // namespace volest::svg
