#pragma once

// Command implementations behind the novikov-lab executable. Each command
// validates its configuration before touching the filesystem, writes only
// under the output directory, and returns one of the exit codes below.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "novikov/config.hpp"
#include "novikov/diagnostics.hpp"
#include "novikov/exact.hpp"
#include "novikov/io.hpp"
#include "novikov/lab.hpp"
#include "novikov/weakform.hpp"

namespace novikov::cli {

enum ExitCode : int { kSuccess = 0, kConfigError = 1, kBlowUp = 2, kPropertyFailure = 3 };

/// One-line machine-readable diagnostic on the error stream.
inline void emit(std::ostream& err, const char* level, const std::string& kind, const std::string& message) {
  std::string escaped;
  for (char ch : message) {
    if (ch == '"' || ch == '\\') escaped += '\\';
    escaped += (ch == '\n') ? ' ' : ch;
  }
  err << "novikov-lab " << level << " kind=" << kind << " message=\"" << escaped << "\"\n";
}

namespace detail {

namespace fs = std::filesystem;

inline Field gaussian(const Grid& grid, double amplitude, double center, double width) {
  return Field::sample(grid, [&](double x) {
    const double d = grid.circle_distance(x, center) / width;
    return amplitude * std::exp(-d * d);
  });
}

inline State load_state(const RunConfig& cfg) {
  std::ifstream is(cfg.input_file);
  if (!is) throw ConfigError("cannot read input-file '" + cfg.input_file + "'");
  State s = [&] {
    try {
      return io::read_snapshot(is).state;
    } catch (const std::exception& e) {
      throw ConfigError(std::string("input-file: ") + e.what());
    }
  }();
  if (!(s.grid() == cfg.solver.grid())) throw ConfigError("input-file grid does not match length/points");
  return s;
}

/// Initial state for the selector. Warns when the data lies outside the
/// class with L1 and L2 potentials.
inline State initial_state(const RunConfig& cfg, std::ostream& err) {
  const Grid grid = cfg.solver.grid();
  switch (cfg.initial) {
    case InitialData::Peakon:
      emit(err, "warning", "point-mass-potential",
           "raw peakon potential is a point measure, not an L^p function; results are indicative only");
      return peakon(cfg.c, 0.0, grid, cfg.x0);
    case InitialData::PeriodicPeakon:
      emit(err, "warning", "point-mass-potential",
           "periodic peakon potential is a point measure, not an L^p function; results are indicative only");
      return periodic_peakon(cfg.c, 0.0, grid);
    case InitialData::MollifiedPeakon:
      return mollified_peakon(cfg.c, cfg.mollifier_n, grid, cfg.x0);
    case InitialData::GaussianPotentials: {
      const Field m = gaussian(grid, cfg.amplitude, cfg.x0, cfg.width);
      Field u = helm_inv(m);
      Field v = u;
      return {std::move(u), std::move(v)};
    }
    case InitialData::FromFile:
      return load_state(cfg);
  }
  throw ConfigError("unhandled initial data selector");
}

/// Initial potentials for the mollification study. Peakon selectors give the
/// point-mass potential on the grid.
inline Potentials initial_potentials(const RunConfig& cfg, std::ostream& err) {
  const Grid grid = cfg.solver.grid();
  switch (cfg.initial) {
    case InitialData::Peakon: {
      Field m = peakon_potential(cfg.c, grid, cfg.x0);
      Field n = m;
      return {std::move(m), std::move(n)};
    }
    case InitialData::PeriodicPeakon: {
      // The periodic crest carries mass 2 sqrt(c) tanh(pi).
      Field m = peakon_potential(cfg.c, grid, 0.0) * std::tanh(std::numbers::pi);
      Field n = m;
      return {std::move(m), std::move(n)};
    }
    default:
      return potentials(initial_state(cfg, err));
  }
}

inline void prepare_output(const fs::path& out, const RunConfig& cfg) {
  fs::create_directories(out);
  io::write_file((out / "config.txt").string(), [&](std::ostream& os) { os << echo_config(cfg); });
}

inline void write_trajectory(const fs::path& out, const Trajectory& traj, const std::vector<Report>& reports) {
  fs::create_directories(out / "snapshots");
  for (std::size_t i = 0; i < traj.size(); ++i) {
    char name[48];
    std::snprintf(name, sizeof name, "snapshot_%06zu.csv", i);
    io::write_file((out / "snapshots" / name).string(),
                   [&](std::ostream& os) { io::write_snapshot(os, traj.states[i], traj.times[i]); });
  }
  io::write_file((out / "diagnostics.csv").string(), [&](std::ostream& os) { io::write_reports(os, reports); });
}

/// Monitored reports when the sign condition holds, plain reports otherwise.
inline std::vector<Report> monitored_reports(const Trajectory& traj, std::ostream& err, std::ostream& summary) {
  try {
    AprioriReport a = apriori_report(traj);
    summary << "initial-energy = " << io::format_double(a.initial_energy) << '\n';
    summary << "exponent-m-l1 = " << io::format_double(a.exponents.m_l1) << '\n';
    summary << "exponent-m-l2 = " << io::format_double(a.exponents.m_l2) << '\n';
    summary << "exponent-n-l1 = " << io::format_double(a.exponents.n_l1) << '\n';
    summary << "exponent-n-l2 = " << io::format_double(a.exponents.n_l2) << '\n';
    summary << "exponent-h1-u = " << io::format_double(a.exponents.h1_u) << '\n';
    summary << "exponent-h1-v = " << io::format_double(a.exponents.h1_v) << '\n';
    summary << "h1-growth-exceeds-energy = " << (a.h1_growth_exceeds_energy ? "true" : "false") << '\n';
    summary << "monitors-clean = " << (a.clean() ? "true" : "false") << '\n';
    return std::move(a.records);
  } catch (const SignConditionError& e) {
    emit(err, "warning", "sign-condition", std::string(e.what()) + "; a priori monitors skipped");
    return diagnose(traj);
  }
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    emit(err, "error", "config", e.what());
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    emit(err, "error", "precondition", e.what());
    return kConfigError;
  } catch (const SignConditionError& e) {
    emit(err, "error", "sign-condition", e.what());
    return kConfigError;
  } catch (const BlowUpError& e) {
    emit(err, "error", "blow-up", e.what());
    return kBlowUp;
  } catch (const CflStarvationError& e) {
    emit(err, "error", "blow-up", e.what());
    return kBlowUp;
  } catch (const std::exception& e) {
    emit(err, "error", "io", e.what());
    return kConfigError;
  }
}

}  // namespace detail

inline int cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const State s0 = detail::initial_state(cfg, err);
    detail::prepare_output(out, cfg);
    std::ostringstream summary;
    int code = kSuccess;
    Trajectory traj;
    try {
      traj = integrate(s0, cfg.solver);
    } catch (const BlowUpError& e) {
      emit(err, "error", "blow-up", e.what());
      traj = e.partial();
      code = kBlowUp;
    }
    const std::vector<Report> reports = detail::monitored_reports(traj, err, summary);
    detail::write_trajectory(out, traj, reports);
    double drift = 0.0;
    for (const auto& r : reports) {
      const double e0 = reports.front().energy;
      drift = std::max(drift, e0 != 0.0 ? std::abs(r.energy - e0) / std::abs(e0) : std::abs(r.energy));
    }
    summary << "max-energy-drift = " << io::format_double(drift) << '\n';
    io::write_file((out / "summary.txt").string(), [&](std::ostream& os) { os << summary.str(); });
    return code;
  });
}

inline int cmd_peakon_validate(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    if (cfg.initial != InitialData::Peakon && cfg.initial != InitialData::PeriodicPeakon &&
        cfg.initial != InitialData::MollifiedPeakon) {
      throw ConfigError("peakon-validate needs a peakon selector");
    }
    const Grid grid = cfg.solver.grid();
    const State s0 = detail::initial_state(cfg, err);
    detail::prepare_output(out, cfg);
    auto reference = [&](double t) {
      return cfg.initial == InitialData::PeriodicPeakon ? periodic_peakon(cfg.c, t, grid)
                                                        : peakon(cfg.c, t, grid, cfg.x0);
    };

    int code = kSuccess;
    Trajectory traj;
    try {
      traj = integrate(s0, cfg.solver);
    } catch (const BlowUpError& e) {
      emit(err, "error", "blow-up", e.what());
      traj = e.partial();
      code = kBlowUp;
    }

    double final_error = 0.0;
    io::write_file((out / "peakon_error.csv").string(), [&](std::ostream& os) {
      os << "time,sup_err_u,sup_err_v,l2_err_u,l2_err_v,peak_x,expected_peak_x\n";
      for (std::size_t i = 0; i < traj.size(); ++i) {
        const double t = traj.times[i];
        const State ref = reference(t);
        const Field eu = traj.states[i].u - ref.u;
        const Field ev = traj.states[i].v - ref.v;
        const double sup = std::max(lp_norm(eu, kInfinity), lp_norm(ev, kInfinity));
        final_error = sup;
        const double crest = cfg.initial == InitialData::PeriodicPeakon ? 0.0 : cfg.x0;
        const double expected = std::fmod(crest + cfg.c * t, grid.length());
        os << io::format_double(t) << ',' << io::format_double(lp_norm(eu, kInfinity)) << ','
           << io::format_double(lp_norm(ev, kInfinity)) << ',' << io::format_double(lp_norm(eu, 2.0)) << ','
           << io::format_double(lp_norm(ev, 2.0)) << ',' << io::format_double(grid.x(traj.states[i].u.argmax()))
           << ',' << io::format_double(expected) << '\n';
      }
    });
    if (code != kSuccess) return code;
    if (final_error > cfg.tolerance) {
      emit(err, "error", "property",
           "final sup error " + io::format_double(final_error) + " exceeds tolerance " +
               io::format_double(cfg.tolerance));
      return static_cast<int>(kPropertyFailure);
    }
    return static_cast<int>(kSuccess);
  });
}

/// Test-function centres on an nt x nx lattice inside (st, T - st) x [0, L),
/// plus phi_random extra centres drawn with the configured seed.
inline std::vector<TestFunction> test_function_sweep(const RunConfig& cfg, const Trajectory& traj) {
  const double T = traj.final_time();
  const double L = traj.grid().length();
  const double st = cfg.phi_st;
  const double sx = cfg.phi_sx;
  std::vector<TestFunction> phis;
  for (int a = 0; a < cfg.phi_nt; ++a) {
    const double t0 = st + (T - 2.0 * st) * (a + 1.0) / (cfg.phi_nt + 1.0);
    for (int b = 0; b < cfg.phi_nx; ++b) {
      const double x0 = L * (b + 0.5) / cfg.phi_nx;
      phis.push_back(make_phi(t0, x0, st, sx, traj));
    }
  }
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int r = 0; r < cfg.phi_random; ++r) {
    const double t0 = st + (T - 2.0 * st) * (0.05 + 0.9 * unit(rng));
    const double x0 = L * unit(rng);
    phis.push_back(make_phi(t0, x0, st, sx, traj));
  }
  return phis;
}

inline int cmd_weak_check(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const Grid grid = cfg.solver.grid();
    Trajectory traj;
    if (cfg.weak_source == WeakSource::Exact) {
      // Records at the solver's would-be record times.
      std::vector<double> times{0.0};
      const double spacing = cfg.solver.dt * static_cast<double>(cfg.solver.record_every);
      const auto count = static_cast<std::size_t>(std::llround(cfg.solver.final_time / spacing));
      for (std::size_t i = 1; i <= count; ++i) times.push_back(static_cast<double>(i) * spacing);
      traj = tabulate([&](double t) { return periodic_peakon(cfg.c, t, grid); }, times, cfg.solver);
    } else {
      const State s0 = detail::initial_state(cfg, err);
      traj = integrate(s0, cfg.solver);
    }
    // Validate the whole sweep before writing anything.
    const std::vector<TestFunction> phis = test_function_sweep(cfg, traj);
    for (const auto& phi : phis) require_resolved(traj, phi);

    detail::prepare_output(out, cfg);
    const std::vector<Residual> residuals = weak_residuals(traj, phis, default_formulation(traj));
    io::write_file((out / "residuals.csv").string(), [&](std::ostream& os) { io::write_residuals(os, phis, residuals); });
    double amplitude = 0.0;
    for (const auto& st : traj.states) {
      amplitude = std::max({amplitude, lp_norm(st.u, kInfinity), lp_norm(st.v, kInfinity)});
    }
    double worst = 0.0;
    for (const auto& r : residuals) worst = std::max({worst, std::abs(r.u), std::abs(r.v)});
    const double bound = cfg.weak_bound * amplitude * cfg.phi_st * cfg.phi_sx;
    if (worst > bound) {
      emit(err, "error", "property",
           "max residual " + io::format_double(worst) + " exceeds weak-bound * sup|u| * st * sx = " +
               io::format_double(bound));
      return static_cast<int>(kPropertyFailure);
    }
    return static_cast<int>(kSuccess);
  });
}

inline int cmd_mollify_study(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const Potentials p = detail::initial_potentials(cfg, err);
    for (int k : cfg.ks) {
      if (!mollifier_resolved(k, p.m.grid())) {
        throw ConfigError("k = " + std::to_string(k) + " is not resolved by the grid");
      }
    }
    if (cfg.solver.cfl) throw ConfigError("mollify-study needs fixed-step runs (cfl = none)");
    detail::prepare_output(out, cfg);
    const ConvergenceTable table = mollify_study(p.m, p.n, cfg.ks, cfg.solver);
    io::write_file((out / "convergence.csv").string(), [&](std::ostream& os) { io::write_convergence(os, table); });
    for (const auto& r : table.rows) {
      if (r.blew_up) emit(err, "warning", "blow-up", "run k = " + std::to_string(r.k) + " blew up");
    }
    if (!table.cauchy_monotone()) {
      emit(err, "error", "property", "d_k is not non-increasing over the last dyadic steps");
      return static_cast<int>(kPropertyFailure);
    }
    return static_cast<int>(kSuccess);
  });
}

inline int cmd_depend(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    if (cfg.solver.cfl) throw ConfigError("depend needs fixed-step runs (cfl = none)");
    const State s0 = detail::initial_state(cfg, err);
    const Grid grid = cfg.solver.grid();
    const Field p = normalized_perturbation(
        helm_inv(detail::gaussian(grid, 1.0, cfg.perturbation_center, cfg.perturbation_width)));
    const Potentials base = potentials(s0);
    if (negativity(base.m) > kSignTolerance || negativity(base.n) > kSignTolerance) {
      throw ConfigError("depend needs initial data with non-negative potentials");
    }
    detail::prepare_output(out, cfg);
    const DependenceTable table = cont_dependence(s0, cfg.deltas, p, cfg.solver);
    io::write_file((out / "dependence.csv").string(), [&](std::ostream& os) { io::write_dependence(os, table); });
    bool ok = true;
    if (!table.linear_response()) {
      emit(err, "error", "property", "A(T) is not proportional to delta within 10%");
      ok = false;
    }
    if (!table.within_envelope()) {
      emit(err, "error", "property", "fitted exponent exceeds the Gronwall envelope");
      ok = false;
    }
    return static_cast<int>(ok ? kSuccess : kPropertyFailure);
  });
}

}  // namespace novikov::cli
