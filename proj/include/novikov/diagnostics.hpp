#pragma once

// Monitors for the conserved energy, the sign of the potentials, and the
// a priori inequality chains satisfied by solutions with non-negative
// potentials:
//
//   (i)   sup|u_x| <= sup|u| <= (sqrt2/2) |u|_H1 <= (sqrt2/2) |u0|_H1 exp(E0 t)
//   (ii)  the same chain for v
//   (iii) |u|_p, |u_x|_p <= |m|_p            for p in {1, 2}
//   (iv)  |v|_p, |v_x|_p <= |n|_p
//
// The growth constant in |m(t)|_p <= exp(C t) |m0|_p is not known in closed
// form, so it is fitted from the run and reported.

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "novikov/mollify.hpp"
#include "novikov/stepper.hpp"

namespace novikov {

struct Report {
  double time = 0.0;
  double energy = 0.0;
  double l1_m = 0.0;
  double l2_m = 0.0;
  double l1_n = 0.0;
  double l2_n = 0.0;
  double sup_u = 0.0;
  double sup_ux = 0.0;
  double sup_v = 0.0;
  double sup_vx = 0.0;
  double h1_u = 0.0;
  double h1_v = 0.0;
  double neg_m = 0.0;
  double neg_n = 0.0;
  std::vector<std::string> flags;
};

/// E(u, v) = integral of (u v + u_x v_x).
inline double energy(const State& s) {
  const Field ux = deriv(s.u);
  const Field vx = deriv(s.v);
  double sum = 0.0;
  for (std::size_t j = 0; j < s.u.size(); ++j) sum += s.u[j] * s.v[j] + ux[j] * vx[j];
  return sum * s.grid().dx();
}

/// max(0, -min f).
inline double negativity(const Field& f) { return std::max(0.0, -f.min()); }

/// Norms and sign measures of one state; no monitors evaluated.
inline Report report_at(const State& s, double time) {
  const Potentials p = potentials(s);
  Report r;
  r.time = time;
  r.energy = energy(s);
  r.l1_m = lp_norm(p.m, 1.0);
  r.l2_m = lp_norm(p.m, 2.0);
  r.l1_n = lp_norm(p.n, 1.0);
  r.l2_n = lp_norm(p.n, 2.0);
  r.sup_u = lp_norm(s.u, kInfinity);
  r.sup_ux = lp_norm(deriv(s.u), kInfinity);
  r.sup_v = lp_norm(s.v, kInfinity);
  r.sup_vx = lp_norm(deriv(s.v), kInfinity);
  r.h1_u = h1_norm(s.u);
  r.h1_v = h1_norm(s.v);
  r.neg_m = negativity(p.m);
  r.neg_n = negativity(p.n);
  return r;
}

inline std::vector<Report> diagnose(const Trajectory& traj) {
  std::vector<Report> out;
  out.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) out.push_back(report_at(traj.states[i], traj.times[i]));
  return out;
}

class SignConditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Smallest exponents a with norm(t) <= exp(a t) norm(0) over the records.
struct GrowthExponents {
  double m_l1 = 0.0;
  double m_l2 = 0.0;
  double n_l1 = 0.0;
  double n_l2 = 0.0;
  double h1_u = 0.0;
  double h1_v = 0.0;
};

struct AprioriReport {
  std::vector<Report> records;
  GrowthExponents exponents;
  double initial_energy = 0.0;
  /// True when the fitted H1 growth exceeds E(0); reported, never flagged.
  bool h1_growth_exceeds_energy = false;

  bool clean() const {
    for (const auto& r : records) if (!r.flags.empty()) return false;
    return true;
  }
};

inline constexpr double kMonitorSlack = 0.02;
inline constexpr double kSignTolerance = 1e-10;

namespace detail {

inline double fitted_exponent(const std::vector<double>& times, const std::vector<double>& values) {
  double best = 0.0;
  bool any = false;
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (times[i] <= 0.0 || values[0] <= 0.0 || values[i] <= 0.0) continue;
    const double a = std::log(values[i] / values[0]) / times[i];
    best = any ? std::max(best, a) : a;
    any = true;
  }
  return best;
}

struct ComponentNorms {
  double l1 = 0.0;
  double l2 = 0.0;
  double slope_l1 = 0.0;
  double slope_l2 = 0.0;
};

inline ComponentNorms component_norms(const Field& f) {
  const Field fx = deriv(f);
  return {lp_norm(f, 1.0), lp_norm(f, 2.0), lp_norm(fx, 1.0), lp_norm(fx, 2.0)};
}

}  // namespace detail

/// Evaluates monitors (i)-(iv) at every record with the given relative slack.
/// Throws SignConditionError if the initial potentials are negative beyond 1e-10.
inline AprioriReport apriori_report(const Trajectory& traj, double slack = kMonitorSlack) {
  if (traj.size() == 0) throw std::invalid_argument("empty trajectory");
  const Potentials p0 = potentials(traj.states.front());
  if (negativity(p0.m) > kSignTolerance || negativity(p0.n) > kSignTolerance) {
    throw SignConditionError("initial potentials are not non-negative (min m0 = " +
                             std::to_string(p0.m.min()) + ", min n0 = " +
                             std::to_string(p0.n.min()) + ")");
  }

  AprioriReport out;
  out.initial_energy = energy(traj.states.front());
  const double e0 = out.initial_energy;
  const double half_sqrt2 = 0.5 * std::numbers::sqrt2;
  const double relax = 1.0 + slack;

  double h1_u0 = 0.0;
  double h1_v0 = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const State& s = traj.states[i];
    const double t = traj.times[i];
    Report r = report_at(s, t);
    if (i == 0) {
      h1_u0 = r.h1_u;
      h1_v0 = r.h1_v;
    }
    auto check = [&](bool ok, const char* name) {
      if (!ok) r.flags.emplace_back(name);
    };
    const double growth = std::exp(e0 * t);
    check(r.sup_ux <= relax * r.sup_u, "i.sup_ux");
    check(r.sup_u <= relax * half_sqrt2 * r.h1_u, "i.sup_u");
    check(r.h1_u <= relax * h1_u0 * growth, "i.h1_growth");
    check(r.sup_vx <= relax * r.sup_v, "ii.sup_vx");
    check(r.sup_v <= relax * half_sqrt2 * r.h1_v, "ii.sup_v");
    check(r.h1_v <= relax * h1_v0 * growth, "ii.h1_growth");

    const auto u = detail::component_norms(s.u);
    const auto v = detail::component_norms(s.v);
    check(u.l1 <= relax * r.l1_m, "iii.u_l1");
    check(u.slope_l1 <= relax * r.l1_m, "iii.ux_l1");
    check(u.l2 <= relax * r.l2_m, "iii.u_l2");
    check(u.slope_l2 <= relax * r.l2_m, "iii.ux_l2");
    check(v.l1 <= relax * r.l1_n, "iv.v_l1");
    check(v.slope_l1 <= relax * r.l1_n, "iv.vx_l1");
    check(v.l2 <= relax * r.l2_n, "iv.v_l2");
    check(v.slope_l2 <= relax * r.l2_n, "iv.vx_l2");
    out.records.push_back(std::move(r));
  }

  auto column = [&](auto member) {
    std::vector<double> c;
    c.reserve(out.records.size());
    for (const auto& r : out.records) c.push_back(r.*member);
    return c;
  };
  const std::vector<double> times = column(&Report::time);
  out.exponents.m_l1 = detail::fitted_exponent(times, column(&Report::l1_m));
  out.exponents.m_l2 = detail::fitted_exponent(times, column(&Report::l2_m));
  out.exponents.n_l1 = detail::fitted_exponent(times, column(&Report::l1_n));
  out.exponents.n_l2 = detail::fitted_exponent(times, column(&Report::l2_n));
  out.exponents.h1_u = detail::fitted_exponent(times, column(&Report::h1_u));
  out.exponents.h1_v = detail::fitted_exponent(times, column(&Report::h1_v));
  out.h1_growth_exceeds_energy =
      std::max(out.exponents.h1_u, out.exponents.h1_v) > e0;
  return out;
}

/// A = |U|_2 + |U_x|_2 + |V|_2 + |V_x|_2 for U = u1 - u2, V = v1 - v2,
/// optionally after mollifying U and V with rho_n.
inline double error_norms(const State& s1, const State& s2,
                          std::optional<int> mollifier_n = std::nullopt) {
  Field du = s1.u - s2.u;
  Field dv = s1.v - s2.v;
  if (mollifier_n) {
    du = mollify(du, *mollifier_n);
    dv = mollify(dv, *mollifier_n);
  }
  return lp_norm(du, 2.0) + lp_norm(deriv(du), 2.0) + lp_norm(dv, 2.0) + lp_norm(deriv(dv), 2.0);
}

}  // namespace novikov
