#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "novikov/dynamics.hpp"

namespace novikov {

struct SolverConfig {
  double final_time = 1.0;
  double dt = 1e-3;
  /// When set, the step is chosen each step as cfl * dx / max(1, max|u v|).
  std::optional<double> cfl;
  double length = 40.0;
  std::size_t points = 2048;
  Dealias dealias = Dealias::Auto;
  std::size_t record_every = 1;

  void validate() const {
    if (!(final_time >= 0.0) || !std::isfinite(final_time)) {
      throw std::invalid_argument("final time must be finite and non-negative");
    }
    if (cfl) {
      if (!(*cfl > 0.0 && *cfl <= 1.0)) throw std::invalid_argument("cfl must lie in (0, 1]");
    } else if (!(dt > 0.0) || !std::isfinite(dt)) {
      throw std::invalid_argument("dt must be positive");
    }
    if (record_every < 1) throw std::invalid_argument("record_every must be >= 1");
    (void)Grid::make(length, points);
  }

  Grid grid() const { return Grid::make(length, points); }
};

struct Trajectory {
  SolverConfig config;
  std::vector<double> times;
  std::vector<State> states;
  /// Integrator steps taken up to each record.
  std::vector<std::size_t> steps;

  const Grid& grid() const { return states.front().grid(); }
  double final_time() const { return times.back(); }
  std::size_t size() const { return times.size(); }
};

/// Thrown when a stage goes non-finite or |u|, |v| exceed kBlowUpThreshold.
/// Carries everything recorded so far plus the last finite state.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(std::string what, Trajectory partial, State last, double time)
      : std::runtime_error(std::move(what)),
        partial_(std::move(partial)),
        last_(std::move(last)),
        time_(time) {}

  const Trajectory& partial() const { return partial_; }
  const State& last_finite_state() const { return last_; }
  double time() const { return time_; }

 private:
  Trajectory partial_;
  State last_;
  double time_;
};

class CflStarvationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kBlowUpThreshold = 1e6;
inline constexpr double kMinTimeStep = 1e-12;

namespace detail {

inline bool blown_up(const State& s) {
  if (!s.finite()) return true;
  for (double x : s.u) if (std::abs(x) > kBlowUpThreshold) return true;
  for (double x : s.v) if (std::abs(x) > kBlowUpThreshold) return true;
  return false;
}

}  // namespace detail

/// Classical four-stage Runge-Kutta step for an arbitrary right-hand side.
/// Returns std::nullopt if any stage or the result is non-finite.
template <class Rhs>
std::optional<State> rk4_step(const State& s, double dt, Rhs&& rhs) {
  const State k1 = rhs(s);
  if (!k1.finite()) return std::nullopt;
  const State k2 = rhs(s + (0.5 * dt) * k1);
  if (!k2.finite()) return std::nullopt;
  const State k3 = rhs(s + (0.5 * dt) * k2);
  if (!k3.finite()) return std::nullopt;
  const State k4 = rhs(s + dt * k3);
  if (!k4.finite()) return std::nullopt;
  State next = s;
  next += (dt / 6.0) * k1;
  next += (dt / 3.0) * k2;
  next += (dt / 3.0) * k3;
  next += (dt / 6.0) * k4;
  if (!next.finite()) return std::nullopt;
  return next;
}

/// One RK4 step of rhs_uv. Throws BlowUpError if a stage is non-finite.
inline State step_rk4(const State& s, double dt, Dealias mode = Dealias::Auto) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_rk4 requires dt > 0");
  auto next = rk4_step(s, dt, [mode](const State& x) { return rhs_uv(x, mode); });
  if (!next) {
    Trajectory none;
    throw BlowUpError("non-finite stage in RK4 step", std::move(none), s, 0.0);
  }
  return *next;
}

namespace detail {

inline double max_transport_speed(const State& s) {
  double m = 0.0;
  for (std::size_t j = 0; j < s.u.size(); ++j) m = std::max(m, std::abs(s.u[j] * s.v[j]));
  return m;
}

}  // namespace detail

/// Integrates rhs_uv from s0 to cfg.final_time. The last step is shortened to
/// land on final_time exactly, and the final state is always recorded.
inline Trajectory integrate(const State& s0, const SolverConfig& cfg) {
  cfg.validate();
  if (!(s0.grid() == cfg.grid()) || !(s0.v.grid() == cfg.grid())) {
    throw std::invalid_argument("initial state is not on the configured grid");
  }
  if (!s0.finite()) throw std::invalid_argument("initial state is not finite");

  Trajectory traj;
  traj.config = cfg;
  traj.times.push_back(0.0);
  traj.states.push_back(s0);
  traj.steps.push_back(0);

  const double T = cfg.final_time;
  if (T == 0.0) return traj;

  const double dx = cfg.grid().dx();
  auto rhs = [mode = cfg.dealias](const State& x) { return rhs_uv(x, mode); };

  // Fixed-step mode computes times as i * dt to avoid accumulated drift.
  std::size_t fixed_steps = 0;
  if (!cfg.cfl) {
    const double ratio = T / cfg.dt;
    fixed_steps = static_cast<std::size_t>(std::ceil(ratio - 1e-9 * std::max(1.0, ratio)));
    fixed_steps = std::max<std::size_t>(fixed_steps, 1);
  }

  State s = s0;
  double t = 0.0;
  std::size_t step = 0;
  while (true) {
    double dt;
    double t_next;
    bool last;
    if (cfg.cfl) {
      dt = *cfg.cfl * dx / std::max(1.0, detail::max_transport_speed(s));
      if (dt < kMinTimeStep) {
        throw CflStarvationError("adaptive time step " + std::to_string(dt) +
                                 " underflowed at t = " + std::to_string(t));
      }
      last = t + dt >= T;
      if (last) dt = T - t;
      t_next = last ? T : t + dt;
    } else {
      last = step + 1 == fixed_steps;
      t_next = last ? T : static_cast<double>(step + 1) * cfg.dt;
      dt = t_next - t;
    }

    auto next = rk4_step(s, dt, rhs);
    if (!next || detail::blown_up(*next)) {
      const double when = t;
      State last_state = s;
      throw BlowUpError("solution blew up after t = " + std::to_string(when), std::move(traj),
                        std::move(last_state), when);
    }
    s = std::move(*next);
    t = t_next;
    ++step;
    if (last || step % cfg.record_every == 0) {
      traj.times.push_back(t);
      traj.states.push_back(s);
      traj.steps.push_back(step);
    }
    if (last) break;
  }
  return traj;
}

/// Builds a trajectory by evaluating a closed-form solution at the given
/// times, for residual checks that bypass the integrator.
template <class Solution>
Trajectory tabulate(Solution&& solution, const std::vector<double>& times, const SolverConfig& cfg) {
  if (times.empty() || times.front() != 0.0) throw std::invalid_argument("times must start at 0");
  Trajectory traj;
  traj.config = cfg;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (i > 0 && !(times[i] > times[i - 1])) throw std::invalid_argument("times must increase");
    traj.times.push_back(times[i]);
    traj.states.push_back(solution(times[i]));
    traj.steps.push_back(i);
  }
  return traj;
}

}  // namespace novikov
