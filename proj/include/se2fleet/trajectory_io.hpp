#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "se2fleet/dynamics.hpp"
#include "se2fleet/errors.hpp"

// Trajectory serialization. One CSV row per recorded sample:
//   t, then per agent: theta, x, y, mu1, mu2, mu3, alpha1, alpha2, alpha3,
//   u1, u2, then h, min_pair_dist, min_obs_clearance.
// Values are written with 17 significant digits so that reading them back
// reproduces every double bit-exactly. An aborted run ends with a comment
// row "# aborted at step <k>: <reason>".

namespace se2fleet {

inline constexpr int kAgentColumns = 11;

void write_trajectory_csv(const Trajectory& traj, std::ostream& os);
void write_trajectory_csv_file(const Trajectory& traj, const std::string& path);

struct CsvTrajectory {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  int n_agents = 0;
  bool aborted = false;
  std::string abort_note;

  int column(const std::string& name) const;  // -1 if absent
};

/// Throws ParseError on empty input, malformed numbers, or ragged rows.
CsvTrajectory read_trajectory_csv(std::istream& is);
CsvTrajectory read_trajectory_csv_file(const std::string& path);

/// Human-readable run summary (final poses, conservation drift, minima).
std::string trajectory_summary(const Trajectory& traj);

}  // namespace se2fleet
