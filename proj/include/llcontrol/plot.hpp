#pragma once

// Minimal static SVG line plots for the CSV outputs, enough to eyeball a run.
// Not a plotting library.

#include <filesystem>
#include <string>
#include <vector>

namespace llc {

struct Series {
  std::string name;
  std::vector<double> x, y;
};

struct Panel {
  std::string title;
  std::string x_label, y_label;
  std::vector<Series> series;
  bool log_y = false;
};

/// Panels laid out in a row; each gets its own axes.
void write_svg(const std::filesystem::path& path, const std::vector<Panel>& panels);

/// Header plus rows of numeric cells; non-numeric cells read as NaN.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

/// Renders whichever of diagnostics.csv, trajectory.csv and loops.csv exist in
/// `dir` to SVG files next to them. Returns the files written.
std::vector<std::filesystem::path> plot_results(const std::filesystem::path& dir);

}  // namespace llc
