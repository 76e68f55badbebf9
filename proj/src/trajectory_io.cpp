#include "se2fleet/trajectory_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace se2fleet {

namespace {

// 17 significant digits: lossless decimal round-trip for IEEE doubles
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& tok, int line_no) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    std::ostringstream os;
    os << "CSV line " << line_no << ": not a number: '" << tok << "'";
    throw ParseError(os.str());
  }
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string tok;
  std::istringstream is(line);
  while (std::getline(is, tok, ',')) out.push_back(tok);
  return out;
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
  const int s = traj.final_state.size();
  os << "t";
  for (int i = 1; i <= s; ++i) {
    os << ",theta_" << i << ",x_" << i << ",y_" << i << ",mu1_" << i << ",mu2_" << i
       << ",mu3_" << i << ",alpha1_" << i << ",alpha2_" << i << ",alpha3_" << i
       << ",u1_" << i << ",u2_" << i;
  }
  os << ",h,min_pair_dist,min_obs_clearance\n";
  for (const TrajectorySample& sm : traj.samples) {
    os << fmt(sm.t);
    for (int i = 0; i < s; ++i) {
      const AgentState& a = sm.agents[i];
      const Twist& u = sm.controls[i];
      os << ',' << fmt(a.g.theta) << ',' << fmt(a.g.x) << ',' << fmt(a.g.y) << ','
         << fmt(a.mu.m1) << ',' << fmt(a.mu.m2) << ',' << fmt(a.mu.m3) << ','
         << fmt(a.alpha.a) << ',' << fmt(a.alpha.v1) << ',' << fmt(a.alpha.v2) << ','
         << fmt(u.a) << ',' << fmt(u.v1);
    }
    os << ',' << fmt(sm.h) << ',' << fmt(sm.min_pair_dist) << ','
       << fmt(sm.min_obs_clearance) << '\n';
  }
  if (traj.aborted)
    os << "# aborted at step " << traj.abort_step << ": " << traj.abort_reason << '\n';
}

void write_trajectory_csv_file(const Trajectory& traj, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ParseError("cannot open for writing: " + path);
  write_trajectory_csv(traj, os);
}

int CsvTrajectory::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  return -1;
}

CsvTrajectory read_trajectory_csv(std::istream& is) {
  CsvTrajectory out;
  std::string line;
  int line_no = 0;
  if (!std::getline(is, line)) throw ParseError("empty CSV");
  ++line_no;
  out.columns = split(line);
  if (out.columns.empty() || out.columns[0] != "t")
    throw ParseError("CSV header must start with column 't'");
  const int extra = static_cast<int>(out.columns.size()) - 4;
  if (extra < 0 || extra % kAgentColumns != 0)
    throw ParseError("CSV header has an unexpected column count");
  out.n_agents = extra / kAgentColumns;

  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      out.aborted = true;
      out.abort_note = line;
      continue;
    }
    const std::vector<std::string> toks = split(line);
    if (toks.size() != out.columns.size()) {
      std::ostringstream os;
      os << "CSV line " << line_no << ": expected " << out.columns.size()
         << " fields, got " << toks.size();
      throw ParseError(os.str());
    }
    std::vector<double> row(toks.size());
    for (std::size_t i = 0; i < toks.size(); ++i) row[i] = parse_double(toks[i], line_no);
    out.rows.push_back(std::move(row));
  }
  return out;
}

CsvTrajectory read_trajectory_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open: " + path);
  return read_trajectory_csv(is);
}

std::string trajectory_summary(const Trajectory& traj) {
  std::ostringstream os;
  const SystemState& fs = traj.final_state;
  os << "steps completed: " << traj.n_steps_completed << "\n";
  if (traj.aborted)
    os << "ABORTED at step " << traj.abort_step << ": " << traj.abort_reason << "\n";
  os << "final t: " << fmt(fs.t) << "\n";
  for (int i = 0; i < fs.size(); ++i) {
    const Pose2& g = fs.agents[i].g;
    os << "agent " << i + 1 << " final pose: theta=" << fmt(g.theta)
       << " x=" << fmt(g.x) << " y=" << fmt(g.y) << "\n";
  }
  os << "h drift (max |h - h0|): " << fmt(traj.h_drift_max) << "\n";
  os << "min pairwise distance: " << fmt(traj.min_pair_dist) << "\n";
  os << "min obstacle clearance: " << fmt(traj.min_obs_clearance) << "\n";
  return os.str();
}

}  // namespace se2fleet
