#pragma once

#include <iosfwd>
#include <string>

#include "se2fleet/trajectory_io.hpp"

// Static SVG path plot of a recorded trajectory: one polyline per agent, the
// unit obstacle disc and the r_bar + 1 guard circle, start (circle) and end
// (square) markers. Output bytes are a deterministic function of the input.

namespace se2fleet {

void emit_svg(const CsvTrajectory& csv, double r_bar, std::ostream& os);
void emit_svg_file(const CsvTrajectory& csv, double r_bar, const std::string& path);

}  // namespace se2fleet
