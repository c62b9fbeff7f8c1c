#pragma once

// Space-time weak-form residuals of a trajectory. For a test function phi
// supported in [0, T] x torus,
//
//   r_u = int int (u phi_t + u_t phi) dx dt + int u0 phi(0, x) dx,
//
// where u_t is the tendency of the chosen formulation (rhs_uv by default)
// evaluated on the recorded states. Time is integrated by the trapezoid rule
// over the records and space by the rectangle rule.

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "novikov/mollify.hpp"
#include "novikov/stepper.hpp"

namespace novikov {

enum class SupportMode {
  /// Support strictly inside (0, T); the initial-data term vanishes.
  Interior,
  /// Support may reach t = 0; the initial-data term is included.
  Anchored,
};

/// phi(t, x) = bump((t - t0)/st) * bump(d_L(x, x0)/sx), stored in separable
/// form on the trajectory's record times and grid.
struct TestFunction {
  double t0 = 0.0;
  double x0 = 0.0;
  double st = 1.0;
  double sx = 1.0;
  SupportMode mode = SupportMode::Interior;
  std::vector<double> time_profile;  // psi at each record
  std::vector<double> time_slope;    // d psi / dt at each record
  Field space_profile;               // chi on the grid

  double value(std::size_t record, std::size_t j) const { return time_profile[record] * space_profile[j]; }
  double dt_value(std::size_t record, std::size_t j) const { return time_slope[record] * space_profile[j]; }
};

inline TestFunction make_phi(double t0, double x0, double st, double sx, const Trajectory& traj,
                             SupportMode mode = SupportMode::Interior) {
  if (!(st > 0.0) || !(sx > 0.0)) throw std::invalid_argument("test function scales must be positive");
  const Grid& grid = traj.grid();
  const double T = traj.final_time();
  if (!(t0 + st < T)) throw std::invalid_argument("test function support extends past the final time");
  if (mode == SupportMode::Interior && !(t0 - st > 0.0)) {
    throw std::invalid_argument("interior test function support must start after t = 0");
  }
  if (!(sx < 0.5 * grid.length())) throw std::invalid_argument("spatial support wraps around the torus");

  TestFunction phi{t0, x0, st, sx, mode, {}, {}, Field(grid)};
  phi.time_profile.reserve(traj.size());
  phi.time_slope.reserve(traj.size());
  for (double t : traj.times) {
    const double y = (t - t0) / st;
    phi.time_profile.push_back(bump(y));
    phi.time_slope.push_back(bump_derivative(y) / st);
  }
  phi.space_profile = Field::sample(grid, [&](double x) { return bump(grid.circle_distance(x, x0) / sx); });
  return phi;
}

struct Residual {
  double u = 0.0;
  double v = 0.0;
};

using Formulation = std::function<State(const State&)>;

inline Formulation default_formulation(const Trajectory& traj) {
  return [mode = traj.config.dealias](const State& s) { return rhs_uv(s, mode); };
}

/// Largest gap between consecutive records.
inline double record_spacing(const Trajectory& traj) {
  double gap = 0.0;
  for (std::size_t i = 1; i < traj.size(); ++i) gap = std::max(gap, traj.times[i] - traj.times[i - 1]);
  return gap;
}

/// Checks that phi is resolved: st >= 4 record spacings and sx >= 4 dx, up to
/// the rounding in record times computed as multiples of dt.
inline void require_resolved(const Trajectory& traj, const TestFunction& phi) {
  constexpr double rounding = 1.0 - 1e-9;
  if (phi.st < 4.0 * record_spacing(traj) * rounding) {
    throw std::invalid_argument("test function time scale is under-resolved by the records");
  }
  if (phi.sx < 4.0 * traj.grid().dx() * rounding) {
    throw std::invalid_argument("test function space scale is under-resolved by the grid");
  }
  if (phi.time_profile.size() != traj.size() || !(phi.space_profile.grid() == traj.grid())) {
    throw std::invalid_argument("test function was sampled on a different trajectory");
  }
}

/// Residuals of several test functions against one trajectory. The tendency
/// is evaluated once per record that lies inside some support.
inline std::vector<Residual> weak_residuals(const Trajectory& traj, std::span<const TestFunction> phis,
                                            const Formulation& formulation) {
  for (const auto& phi : phis) require_resolved(traj, phi);
  const std::size_t records = traj.size();
  const double dx = traj.grid().dx();
  std::vector<Residual> out(phis.size());

  for (std::size_t i = 0; i < records; ++i) {
    bool active = false;
    for (const auto& phi : phis) {
      if (phi.time_profile[i] != 0.0 || phi.time_slope[i] != 0.0) active = true;
    }
    if (!active) continue;
    double weight = 0.0;
    if (i > 0) weight += 0.5 * (traj.times[i] - traj.times[i - 1]);
    if (i + 1 < records) weight += 0.5 * (traj.times[i + 1] - traj.times[i]);

    const State& s = traj.states[i];
    const State tendency = formulation(s);
    for (std::size_t q = 0; q < phis.size(); ++q) {
      const TestFunction& phi = phis[q];
      const double psi = phi.time_profile[i];
      const double psi_t = phi.time_slope[i];
      if (psi == 0.0 && psi_t == 0.0) continue;
      double ru = 0.0;
      double rv = 0.0;
      for (std::size_t j = 0; j < s.u.size(); ++j) {
        const double chi = phi.space_profile[j];
        if (chi == 0.0) continue;
        ru += (s.u[j] * psi_t + tendency.u[j] * psi) * chi;
        rv += (s.v[j] * psi_t + tendency.v[j] * psi) * chi;
      }
      out[q].u += weight * dx * ru;
      out[q].v += weight * dx * rv;
    }
  }

  // Initial-data term. Zero for interior supports since psi(0) = 0 there.
  const State& s0 = traj.states.front();
  for (std::size_t q = 0; q < phis.size(); ++q) {
    const double psi0 = phis[q].time_profile.front();
    if (psi0 == 0.0) continue;
    double iu = 0.0;
    double iv = 0.0;
    for (std::size_t j = 0; j < s0.u.size(); ++j) {
      iu += s0.u[j] * phis[q].space_profile[j];
      iv += s0.v[j] * phis[q].space_profile[j];
    }
    out[q].u += psi0 * dx * iu;
    out[q].v += psi0 * dx * iv;
  }
  return out;
}

inline Residual weak_residual(const Trajectory& traj, const TestFunction& phi,
                              const Formulation& formulation) {
  return weak_residuals(traj, std::span<const TestFunction>(&phi, 1), formulation).front();
}

inline Residual weak_residual(const Trajectory& traj, const TestFunction& phi) {
  return weak_residual(traj, phi, default_formulation(traj));
}

}  // namespace novikov
