#include "llcontrol/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "llcontrol/model.hpp"

namespace llc {

namespace {

constexpr double kPanelW = 360.0, kPanelH = 280.0, kMargin = 48.0;
const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

void draw_panel(std::ostream& out, const Panel& p, double x0) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  auto ty = [&](double y) { return p.log_y ? std::log10(y) : y; };
  for (const auto& s : p.series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double y = ty(s.y[i]);
      if (!std::isfinite(s.x[i]) || !std::isfinite(y)) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;

  const double w = kPanelW - 2 * kMargin, h = kPanelH - 2 * kMargin;
  auto px = [&](double x) { return x0 + kMargin + (x - xmin) / (xmax - xmin) * w; };
  auto py = [&](double y) { return kMargin + (1.0 - (y - ymin) / (ymax - ymin)) * h; };

  out << "<rect x='" << x0 + kMargin << "' y='" << kMargin << "' width='" << w << "' height='"
      << h << "' fill='none' stroke='#444'/>\n";
  out << "<text x='" << x0 + kPanelW / 2 << "' y='" << kMargin / 2
      << "' text-anchor='middle' font-size='13'>" << escape(p.title) << "</text>\n";
  out << "<text x='" << x0 + kPanelW / 2 << "' y='" << kPanelH - 8
      << "' text-anchor='middle' font-size='11'>" << escape(p.x_label) << "</text>\n";
  const std::string ylab = p.log_y ? "log10 " + p.y_label : p.y_label;
  out << "<text x='" << x0 + 12 << "' y='" << kPanelH / 2 << "' font-size='11' transform='rotate(-90 "
      << x0 + 12 << ' ' << kPanelH / 2 << ")' text-anchor='middle'>" << escape(ylab) << "</text>\n";
  for (double f : {0.0, 1.0}) {
    out << "<text x='" << px(xmin + f * (xmax - xmin)) << "' y='" << kMargin + h + 14
        << "' text-anchor='middle' font-size='9'>" << num(xmin + f * (xmax - xmin)) << "</text>\n";
    out << "<text x='" << x0 + kMargin - 3 << "' y='" << py(ymin + f * (ymax - ymin)) + 3
        << "' text-anchor='end' font-size='9'>" << num(ymin + f * (ymax - ymin)) << "</text>\n";
  }

  for (std::size_t k = 0; k < p.series.size(); ++k) {
    const auto& s = p.series[k];
    const char* color = kColors[k % std::size(kColors)];
    out << "<polyline fill='none' stroke-width='1.2' stroke='" << color << "' points='";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double y = ty(s.y[i]);
      if (std::isfinite(s.x[i]) && std::isfinite(y)) out << px(s.x[i]) << ',' << py(y) << ' ';
    }
    out << "'/>\n";
    out << "<text x='" << x0 + kMargin + w - 4 << "' y='" << kMargin + 12 + 12 * k
        << "' text-anchor='end' font-size='10' fill='" << color << "'>" << escape(s.name)
        << "</text>\n";
  }
}

}  // namespace

void write_svg(const std::filesystem::path& path, const std::vector<Panel>& panels) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  const double width = kPanelW * static_cast<double>(std::max<std::size_t>(panels.size(), 1));
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << kPanelH
      << "' font-family='sans-serif'>\n<rect width='100%' height='100%' fill='white'/>\n";
  for (std::size_t i = 0; i < panels.size(); ++i)
    draw_panel(out, panels[i], kPanelW * static_cast<double>(i));
  out << "</svg>\n";
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw ValidationError("csv has no column '" + name + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path.string() + ": empty csv");
  std::istringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) t.header.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream rs(line);
    for (std::string cell; std::getline(rs, cell, ',');) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      row.push_back(end != cell.c_str() && *end == '\0' ? v : std::numeric_limits<double>::quiet_NaN());
    }
    row.resize(t.header.size(), std::numeric_limits<double>::quiet_NaN());
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::vector<std::filesystem::path> plot_results(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;

  if (std::filesystem::exists(dir / "diagnostics.csv")) {
    const CsvTable t = read_csv(dir / "diagnostics.csv");
    Panel p{"distance and Lyapunov value", "t", "value", {}, true};
    for (const char* col : {"l2_dist", "h1_dist", "lyapunov"}) {
      Series s{col, {}, {}};
      const std::size_t c = t.column(col), tc = t.column("t");
      for (const auto& r : t.rows) {
        s.x.push_back(r[tc]);
        s.y.push_back(r[c]);
      }
      p.series.push_back(std::move(s));
    }
    written.push_back(dir / "diagnostics.svg");
    write_svg(written.back(), {p});
  }

  if (std::filesystem::exists(dir / "trajectory.csv")) {
    const CsvTable t = read_csv(dir / "trajectory.csv");
    const std::size_t tc = t.column("t"), nc = t.column("node_index");
    double max_node = 0.0;
    for (const auto& r : t.rows) max_node = std::max(max_node, r[nc]);
    const double mid = std::floor(max_node / 2.0);
    Panel p{"m at node " + num(mid), "t", "m", {}, false};
    for (const char* col : {"m1", "m2", "m3"}) {
      Series s{col, {}, {}};
      const std::size_t c = t.column(col);
      for (const auto& r : t.rows)
        if (r[nc] == mid) {
          s.x.push_back(r[tc]);
          s.y.push_back(r[c]);
        }
      p.series.push_back(std::move(s));
    }
    written.push_back(dir / "trajectory.svg");
    write_svg(written.back(), {p});
  }

  if (std::filesystem::exists(dir / "loops.csv")) {
    const CsvTable t = read_csv(dir / "loops.csv");
    const std::size_t oc = t.column("omega"), ic = t.column("input"), uc = t.column("output");
    std::vector<double> order;
    std::map<double, Series> by_omega;
    for (const auto& r : t.rows) {
      if (!by_omega.count(r[oc])) order.push_back(r[oc]);
      auto& s = by_omega[r[oc]];
      s.x.push_back(r[ic]);
      s.y.push_back(r[uc]);
    }
    std::vector<Panel> panels;
    for (double w : order) {
      Panel p{"omega = " + num(w), "input", "output", {}, false};
      p.series.push_back(by_omega[w]);
      panels.push_back(std::move(p));
    }
    written.push_back(dir / "loops.svg");
    write_svg(written.back(), panels);
  }
  return written;
}

}  // namespace llc
