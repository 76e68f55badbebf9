#include "se2fleet/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

namespace se2fleet {

namespace {

constexpr int kCanvas = 800;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

void emit_svg(const CsvTrajectory& csv, double r_bar, std::ostream& os) {
  if (csv.rows.empty()) throw ParseError("CSV has no data rows to plot");
  const int s = csv.n_agents;
  std::vector<int> xc(s), yc(s);
  for (int i = 0; i < s; ++i) {
    xc[i] = csv.column("x_" + std::to_string(i + 1));
    yc[i] = csv.column("y_" + std::to_string(i + 1));
    if (xc[i] < 0 || yc[i] < 0)
      throw ParseError("CSV is missing x/y columns for agent " + std::to_string(i + 1));
  }

  // world bounds: data plus the guard circle, with a 10% margin
  const double guard = r_bar + 1.0;
  double xmin = -guard, xmax = guard, ymin = -guard, ymax = guard;
  for (const auto& row : csv.rows)
    for (int i = 0; i < s; ++i) {
      xmin = std::min(xmin, row[xc[i]]);
      xmax = std::max(xmax, row[xc[i]]);
      ymin = std::min(ymin, row[yc[i]]);
      ymax = std::max(ymax, row[yc[i]]);
    }
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-9});
  const double margin = 0.1 * span;
  const double scale = kCanvas / (span + 2.0 * margin);
  const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
  // y axis points up in the plane, down in SVG
  auto X = [&](double x) { return 0.5 * kCanvas + (x - cx) * scale; };
  auto Y = [&](double y) { return 0.5 * kCanvas - (y - cy) * scale; };

  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvas
     << "\" height=\"" << kCanvas << "\" viewBox=\"0 0 " << kCanvas << " " << kCanvas
     << "\">\n"
     << "<rect width=\"" << kCanvas << "\" height=\"" << kCanvas
     << "\" fill=\"white\"/>\n";
  os << "<circle cx=\"" << px(X(0)) << "\" cy=\"" << px(Y(0)) << "\" r=\""
     << px(guard * scale)
     << "\" fill=\"none\" stroke=\"#999999\" stroke-dasharray=\"6 4\"/>\n";
  os << "<circle cx=\"" << px(X(0)) << "\" cy=\"" << px(Y(0)) << "\" r=\""
     << px(1.0 * scale) << "\" fill=\"#cccccc\" stroke=\"#666666\"/>\n";

  for (int i = 0; i < s; ++i) {
    const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
      if (r) os << ' ';
      os << px(X(csv.rows[r][xc[i]])) << ',' << px(Y(csv.rows[r][yc[i]]));
    }
    os << "\"/>\n";
    const auto& first = csv.rows.front();
    const auto& last = csv.rows.back();
    os << "<circle cx=\"" << px(X(first[xc[i]])) << "\" cy=\"" << px(Y(first[yc[i]]))
       << "\" r=\"5\" fill=\"" << color << "\"/>\n";
    os << "<rect x=\"" << px(X(last[xc[i]]) - 4.0) << "\" y=\""
       << px(Y(last[yc[i]]) - 4.0) << "\" width=\"8\" height=\"8\" fill=\"" << color
       << "\"/>\n";
  }
  os << "</svg>\n";
}

void emit_svg_file(const CsvTrajectory& csv, double r_bar, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ParseError("cannot open for writing: " + path);
  emit_svg(csv, r_bar, os);
}

}  // namespace se2fleet
