#pragma once

// CSV and snapshot persistence. All floating-point output uses 17 significant
// digits so a value written and read back is bit-identical.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "novikov/diagnostics.hpp"
#include "novikov/lab.hpp"
#include "novikov/weakform.hpp"

namespace novikov::io {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (i > 0) out += ';';
    out += flags[i];
  }
  return out;
}

inline const char* kReportHeader =
    "time,E,l1_m,l2_m,l1_n,l2_n,sup_u,sup_ux,sup_v,sup_vx,h1_u,h1_v,neg_m,neg_n,flags";

inline void write_reports(std::ostream& os, const std::vector<Report>& reports) {
  os << kReportHeader << '\n';
  for (const auto& r : reports) {
    for (double v : {r.time, r.energy, r.l1_m, r.l2_m, r.l1_n, r.l2_n, r.sup_u, r.sup_ux, r.sup_v,
                     r.sup_vx, r.h1_u, r.h1_v, r.neg_m, r.neg_n}) {
      os << format_double(v) << ',';
    }
    os << join_flags(r.flags) << '\n';
  }
}

/// Snapshot layout: a '#' header block describing the grid, then a "u,v"
/// header row and one row per grid point. x_j = j * length / points.
inline void write_snapshot(std::ostream& os, const State& s, double time) {
  const Grid& g = s.grid();
  os << "# novikov snapshot\n";
  os << "# time " << format_double(time) << '\n';
  os << "# length " << format_double(g.length()) << '\n';
  os << "# points " << g.size() << '\n';
  os << "# x_j = j * length / points\n";
  os << "u,v\n";
  for (std::size_t j = 0; j < g.size(); ++j) {
    os << format_double(s.u[j]) << ',' << format_double(s.v[j]) << '\n';
  }
}

struct Snapshot {
  double time = 0.0;
  State state;
};

inline Snapshot read_snapshot(std::istream& is) {
  std::string line;
  double time = 0.0;
  double length = -1.0;
  long long points = -1;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] != '#') break;
    std::istringstream ls(line.substr(1));
    std::string key;
    ls >> key;
    if (key == "time") ls >> time;
    if (key == "length") ls >> length;
    if (key == "points") ls >> points;
  }
  if (line != "u,v") throw std::runtime_error("snapshot: expected 'u,v' header row");
  if (length <= 0.0 || points <= 0) throw std::runtime_error("snapshot: missing length/points header");
  const Grid grid = Grid::make(length, static_cast<std::size_t>(points));
  Field u(grid), v(grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!std::getline(is, line)) throw std::runtime_error("snapshot: truncated data");
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("snapshot: malformed row " + std::to_string(j));
    try {
      u[j] = std::stod(line.substr(0, comma));
      v[j] = std::stod(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw std::runtime_error("snapshot: malformed number in row " + std::to_string(j));
    }
  }
  return {time, {std::move(u), std::move(v)}};
}

inline void write_residuals(std::ostream& os, const std::vector<TestFunction>& phis,
                            const std::vector<Residual>& residuals) {
  os << "t0,x0,st,sx,r_u,r_v\n";
  for (std::size_t q = 0; q < phis.size(); ++q) {
    os << format_double(phis[q].t0) << ',' << format_double(phis[q].x0) << ','
       << format_double(phis[q].st) << ',' << format_double(phis[q].sx) << ','
       << format_double(residuals[q].u) << ',' << format_double(residuals[q].v) << '\n';
  }
}

inline void write_convergence(std::ostream& os, const ConvergenceTable& table) {
  os << "k,d_k,m_l1,m_l2,n_l1,n_l2,blew_up,blowup_time\n";
  for (const auto& r : table.rows) {
    os << r.k << ',' << format_double(r.d) << ',' << format_double(r.m_l1) << ','
       << format_double(r.m_l2) << ',' << format_double(r.n_l1) << ',' << format_double(r.n_l2) << ','
       << (r.blew_up ? 1 : 0) << ',' << format_double(r.blowup_time) << '\n';
  }
}

inline void write_dependence(std::ostream& os, const DependenceTable& table) {
  os << "delta,A0,AT,ratio,c_hat,envelope,blew_up\n";
  for (const auto& r : table.rows) {
    os << format_double(r.delta) << ',' << format_double(r.a0) << ',' << format_double(r.aT) << ','
       << format_double(r.ratio) << ',' << format_double(r.c_hat) << ','
       << format_double(table.envelope()) << ',' << (r.blew_up ? 1 : 0) << '\n';
  }
}

template <class Writer>
void write_file(const std::string& path, Writer&& writer) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  writer(os);
  if (!os) throw std::runtime_error("write to " + path + " failed");
}

}  // namespace novikov::io
