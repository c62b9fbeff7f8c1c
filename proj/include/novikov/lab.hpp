#pragma once

// Numerical studies of the approximation scheme behind global weak solutions:
//
//  * mollify_study: solve from rho_k-smoothed potentials for a list of k and
//    measure how fast consecutive runs approach each other in H1, uniformly
//    over the recorded times (a Cauchy-sequence check).
//  * cont_dependence: perturb admissible data by delta * p and track the
//    error functional A(t) = |U| + |U_x| + |V| + |V_x| at the final time
//    (a Lipschitz / Gronwall check).

#include <cmath>
#include <future>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "novikov/diagnostics.hpp"
#include "novikov/mollify.hpp"
#include "novikov/stepper.hpp"

namespace novikov {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Outcome of one solver run inside a sweep.
struct RunOutcome {
  std::optional<Trajectory> trajectory;
  std::optional<double> blowup_time;
  std::string error;

  bool ok() const { return trajectory.has_value(); }
};

inline RunOutcome run_guarded(const State& s0, const SolverConfig& cfg) {
  RunOutcome out;
  try {
    out.trajectory = integrate(s0, cfg);
  } catch (const BlowUpError& e) {
    out.blowup_time = e.time();
    out.error = e.what();
  } catch (const CflStarvationError& e) {
    out.error = e.what();
  }
  return out;
}

/// Runs independent solves concurrently; results come back in input order.
inline std::vector<RunOutcome> run_all(const std::vector<State>& initial, const SolverConfig& cfg) {
  std::vector<std::future<RunOutcome>> jobs;
  jobs.reserve(initial.size());
  for (const auto& s0 : initial) {
    jobs.push_back(std::async(std::launch::async, [&s0, &cfg] { return run_guarded(s0, cfg); }));
  }
  std::vector<RunOutcome> out;
  out.reserve(jobs.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

/// sup over shared records of |u1 - u2|_H1 + |v1 - v2|_H1.
inline double sup_h1_distance(const Trajectory& a, const Trajectory& b) {
  if (a.times != b.times) throw std::invalid_argument("trajectories do not share record times");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double di = h1_norm(a.states[i].u - b.states[i].u) + h1_norm(a.states[i].v - b.states[i].v);
    d = std::max(d, di);
  }
  return d;
}

struct ConvergenceRow {
  int k = 0;
  /// Distance to the run with the next k; NaN for the last row or a failed pair.
  double d = kNaN;
  double m_l1 = 0.0;  // |rho_k * m0 - m0|_1
  double m_l2 = 0.0;
  double n_l1 = 0.0;
  double n_l2 = 0.0;
  bool blew_up = false;
  double blowup_time = kNaN;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;

  /// The last (up to) three finite d values are non-increasing.
  bool cauchy_monotone() const {
    std::vector<double> d;
    for (const auto& r : rows) if (std::isfinite(r.d)) d.push_back(r.d);
    const std::size_t first = d.size() > 3 ? d.size() - 3 : 0;
    for (std::size_t i = first + 1; i < d.size(); ++i) if (d[i] > d[i - 1]) return false;
    return true;
  }
};

inline constexpr double kDataSignTolerance = 1e-12;

namespace detail {

inline void require_fixed_step(const SolverConfig& cfg) {
  if (cfg.cfl) throw std::invalid_argument("lab studies need fixed-step runs to share record times");
}

}  // namespace detail

inline ConvergenceTable mollify_study(const Field& m0, const Field& n0, const std::vector<int>& ks,
                                      const SolverConfig& cfg) {
  cfg.validate();
  detail::require_fixed_step(cfg);
  if (ks.empty()) throw std::invalid_argument("mollify_study needs at least one k");
  if (!(m0.grid() == cfg.grid()) || !(n0.grid() == cfg.grid())) {
    throw std::invalid_argument("initial potentials are not on the configured grid");
  }
  if (!m0.finite() || !n0.finite()) throw std::invalid_argument("initial potentials are not finite");
  if (m0.min() < -kDataSignTolerance || n0.min() < -kDataSignTolerance) {
    throw SignConditionError("initial potentials must be non-negative");
  }
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (i > 0 && ks[i] <= ks[i - 1]) throw std::invalid_argument("ks must be strictly increasing");
    if (!mollifier_resolved(ks[i], m0.grid())) {
      throw std::invalid_argument("k = " + std::to_string(ks[i]) + " is not resolved by the grid");
    }
  }

  ConvergenceTable table;
  std::vector<State> initial;
  for (int k : ks) {
    const Field mk = mollify(m0, k);
    const Field nk = mollify(n0, k);
    ConvergenceRow row;
    row.k = k;
    row.m_l1 = lp_norm(mk - m0, 1.0);
    row.m_l2 = lp_norm(mk - m0, 2.0);
    row.n_l1 = lp_norm(nk - n0, 1.0);
    row.n_l2 = lp_norm(nk - n0, 2.0);
    table.rows.push_back(row);
    initial.push_back({helm_inv(mk), helm_inv(nk)});
  }
  if (ks.size() == 1) return table;

  const std::vector<RunOutcome> runs = run_all(initial, cfg);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (!runs[i].ok()) {
      table.rows[i].blew_up = true;
      table.rows[i].blowup_time = runs[i].blowup_time.value_or(kNaN);
    }
  }
  for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
    if (runs[i].ok() && runs[i + 1].ok()) {
      table.rows[i].d = sup_h1_distance(*runs[i].trajectory, *runs[i + 1].trajectory);
    }
  }
  return table;
}

struct DependenceRow {
  double delta = 0.0;
  double a0 = 0.0;
  double aT = kNaN;
  double ratio = kNaN;
  double c_hat = kNaN;
  bool blew_up = false;
};

struct DependenceTable {
  std::vector<DependenceRow> rows;
  double final_time = 0.0;
  /// sup over records and runs of |m|_{L1} + |m|_{L2} + |n|_{L1} + |n|_{L2}.
  double potential_bound = 0.0;
  double structural_factor = 20.0;

  double envelope() const { return structural_factor * potential_bound; }

  /// Successive A(T) ratios stay within +-10% of the corresponding delta ratios.
  bool linear_response(double tolerance = 0.1) const {
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
      const double expected = rows[i].delta / rows[i + 1].delta;
      const double measured = rows[i].aT / rows[i + 1].aT;
      if (!std::isfinite(measured)) return false;
      if (measured < (1.0 - tolerance) * expected || measured > (1.0 + tolerance) * expected) return false;
    }
    return true;
  }

  bool within_envelope() const {
    for (const auto& r : rows) {
      if (!std::isfinite(r.c_hat) || r.c_hat > envelope()) return false;
    }
    return true;
  }

  /// (max - min) / max |c_hat| over the rows.
  double exponent_spread() const {
    double lo = kInfinity, hi = -kInfinity, mag = 0.0;
    for (const auto& r : rows) {
      lo = std::min(lo, r.c_hat);
      hi = std::max(hi, r.c_hat);
      mag = std::max(mag, std::abs(r.c_hat));
    }
    return mag > 0.0 ? (hi - lo) / mag : 0.0;
  }
};

/// A-norm of a perturbation applied to the u component only.
inline double perturbation_norm(const Field& p) { return lp_norm(p, 2.0) + lp_norm(deriv(p), 2.0); }

inline Field normalized_perturbation(const Field& p) {
  const double a = perturbation_norm(p);
  if (!(a > 0.0)) throw std::invalid_argument("perturbation has zero norm");
  return p * (1.0 / a);
}

inline State perturb(const State& s0, const Field& p, double delta) { return {s0.u + delta * p, s0.v}; }

namespace detail {

inline double potential_bound(const Trajectory& traj) {
  double bound = 0.0;
  for (const auto& r : diagnose(traj)) bound = std::max(bound, r.l1_m + r.l2_m + r.l1_n + r.l2_n);
  return bound;
}

}  // namespace detail

/// Perturbs s0.u by delta * p for each delta and measures A at t = 0 and T
/// against the unperturbed run. p must have unit A-norm.
inline DependenceTable cont_dependence(const State& s0, const std::vector<double>& deltas, const Field& p,
                                       const SolverConfig& cfg) {
  cfg.validate();
  detail::require_fixed_step(cfg);
  if (deltas.empty()) throw std::invalid_argument("cont_dependence needs at least one delta");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0)) throw std::invalid_argument("deltas must be positive");
    if (i > 0 && !(deltas[i] < deltas[i - 1])) throw std::invalid_argument("deltas must be decreasing");
  }
  if (!(p.grid() == cfg.grid()) || !(s0.grid() == cfg.grid())) {
    throw std::invalid_argument("data is not on the configured grid");
  }
  if (std::abs(perturbation_norm(p) - 1.0) > 1e-8) {
    throw std::invalid_argument("perturbation must be unit-normalized in the A-norm");
  }
  const Potentials base = potentials(s0);
  if (negativity(base.m) > kSignTolerance || negativity(base.n) > kSignTolerance) {
    throw SignConditionError("base state potentials must be non-negative");
  }
  const Potentials worst = potentials(perturb(s0, p, deltas.front()));
  if (negativity(worst.m) > kSignTolerance) {
    throw SignConditionError("perturbation breaks the sign condition at the largest delta");
  }

  std::vector<State> initial{s0};
  for (double d : deltas) initial.push_back(perturb(s0, p, d));
  const std::vector<RunOutcome> runs = run_all(initial, cfg);
  if (!runs.front().ok()) throw BlowUpError("base run blew up", Trajectory{}, s0, runs.front().blowup_time.value_or(kNaN));
  const Trajectory& ref = *runs.front().trajectory;

  DependenceTable table;
  table.final_time = cfg.final_time;
  table.potential_bound = detail::potential_bound(ref);
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    DependenceRow row;
    row.delta = deltas[i];
    row.a0 = error_norms(initial[i + 1], s0);
    const RunOutcome& run = runs[i + 1];
    if (run.ok()) {
      const Trajectory& traj = *run.trajectory;
      row.aT = error_norms(traj.states.back(), ref.states.back());
      row.ratio = row.aT / row.a0;
      row.c_hat = cfg.final_time > 0.0 ? std::log(row.ratio) / cfg.final_time : 0.0;
      table.potential_bound = std::max(table.potential_bound, detail::potential_bound(traj));
    } else {
      row.blew_up = true;
    }
    table.rows.push_back(row);
  }
  return table;
}

/// A(T) for a single perturbation size, delta = 0 allowed.
inline double perturbed_distance(const State& s0, double delta, const Field& p, const SolverConfig& cfg) {
  const Trajectory base = integrate(s0, cfg);
  const Trajectory pert = integrate(perturb(s0, p, delta), cfg);
  return error_norms(pert.states.back(), base.states.back());
}

}  // namespace novikov
