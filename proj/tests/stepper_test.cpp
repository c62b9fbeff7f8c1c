#include <gtest/gtest.h>

#include "support.hpp"

using namespace novikov;
using namespace testing_support;

namespace {

SolverConfig small_config(double T, double dt) {
  SolverConfig cfg;
  cfg.final_time = T;
  cfg.dt = dt;
  cfg.length = 2.0 * kPi;
  cfg.points = 64;
  cfg.record_every = 1000000;
  return cfg;
}

State smooth_data(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_state(g, rng, 4, 0.5);
}

}  // namespace

TEST(StepRk4, FixedPoints) {
  const Grid g = make_grid(40.0, 256);
  const State zero{Field(g), Field(g)};
  EXPECT_EQ(step_rk4(zero, 0.1), zero);
  const State c{Field::constant(g, 0.8), Field::constant(g, 0.8)};
  EXPECT_LT(sup_diff(step_rk4(c, 0.1), c), 1e-15);
  EXPECT_THROW(step_rk4(c, 0.0), std::invalid_argument);
}

TEST(StepRk4, GenericStepperMatchesExponential) {
  // u' = -u integrated once: RK4 reproduces the degree-4 Taylor polynomial.
  const Grid g = make_grid(1.0, 16);
  const State s{Field::constant(g, 1.0), Field::constant(g, 2.0)};
  const double h = 0.1;
  const auto next = rk4_step(s, h, [](const State& x) { return -1.0 * x; });
  ASSERT_TRUE(next);
  const double taylor = 1.0 - h + h * h / 2.0 - h * h * h / 6.0 + h * h * h * h / 24.0;
  EXPECT_NEAR((*next).u[0], taylor, 1e-15);
  EXPECT_NEAR((*next).v[3], 2.0 * taylor, 1e-15);
  const auto bad = rk4_step(s, h, [](const State& x) { return std::nan("") * x; });
  EXPECT_FALSE(bad);
}

TEST(SolverConfig, Validation) {
  SolverConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.dt = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.dt = 1e-3;
  cfg.final_time = -1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.final_time = 1.0;
  cfg.cfl = 1.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.cfl.reset();
  cfg.points = 1000;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.points = 1024;
  cfg.record_every = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Integrate, ZeroDurationKeepsOnlyInitialState) {
  const SolverConfig cfg = small_config(0.0, 0.1);
  const State s0 = smooth_data(cfg.grid(), 1);
  const Trajectory traj = integrate(s0, cfg);
  ASSERT_EQ(traj.size(), 1u);
  EXPECT_EQ(traj.states[0], s0);
  EXPECT_EQ(traj.times[0], 0.0);
}

TEST(Integrate, ConstantStateIsStationary) {
  SolverConfig cfg = small_config(5.0, 0.01);
  const State c{Field::constant(cfg.grid(), 1.2), Field::constant(cfg.grid(), 0.4)};
  const Trajectory traj = integrate(c, cfg);
  EXPECT_LT(sup_diff(traj.states.back(), c), 1e-13);
  EXPECT_EQ(traj.final_time(), 5.0);
}

TEST(Integrate, RecordsOnScheduleAndLandsOnFinalTime) {
  SolverConfig cfg = small_config(1.0, 0.03);
  cfg.record_every = 10;
  const Trajectory traj = integrate(smooth_data(cfg.grid(), 2), cfg);
  // 34 steps: records at 0, 10, 20, 30 and the shortened final step.
  ASSERT_EQ(traj.size(), 5u);
  EXPECT_EQ(traj.steps, (std::vector<std::size_t>{0, 10, 20, 30, 34}));
  EXPECT_EQ(traj.times[1], 10 * 0.03);
  EXPECT_EQ(traj.times.back(), 1.0);
}

TEST(Integrate, CflModeLandsOnFinalTime) {
  SolverConfig cfg = small_config(0.5, 1.0);
  cfg.cfl = 0.5;
  cfg.record_every = 1;
  const Trajectory traj = integrate(smooth_data(cfg.grid(), 3), cfg);
  EXPECT_EQ(traj.times.back(), 0.5);
  for (std::size_t i = 1; i < traj.size(); ++i) {
    EXPECT_LE(traj.times[i] - traj.times[i - 1], 0.5 * cfg.grid().dx() + 1e-15);
  }
}

TEST(Integrate, CflStarvation) {
  SolverConfig cfg = small_config(0.5, 1.0);
  cfg.cfl = 1e-14;
  EXPECT_THROW(integrate(smooth_data(cfg.grid(), 4), cfg), CflStarvationError);
}

TEST(Integrate, BlowUpCarriesPartialTrajectory) {
  SolverConfig cfg = small_config(1.0, 0.5);
  cfg.record_every = 1;
  const Grid g = cfg.grid();
  const Field big = Field::sample(g, [](double x) { return 50.0 * std::sin(x) + 60.0; });
  try {
    (void)integrate({big, big}, cfg);
    FAIL() << "expected blow-up";
  } catch (const BlowUpError& e) {
    ASSERT_GE(e.partial().size(), 1u);
    EXPECT_EQ(e.partial().states.front(), (State{big, big}));
    EXPECT_TRUE(e.last_finite_state().finite());
    EXPECT_GE(e.time(), 0.0);
    EXPECT_LT(e.time(), 1.0);
  }
}

TEST(Integrate, RejectsMismatchedGrid) {
  const SolverConfig cfg = small_config(1.0, 0.1);
  const Grid other = make_grid(40.0, 64);
  EXPECT_THROW(integrate({Field(other), Field(other)}, cfg), std::invalid_argument);
}

TEST(Integrate, MollifiedPeakonTravelsAtUnitSpeed) {
  SolverConfig cfg;
  cfg.final_time = 1.0;
  cfg.record_every = 1000;
  const Grid g = cfg.grid();
  const State s0 = mollified_peakon(1.0, 32, g, 20.0);
  const Trajectory traj = integrate(s0, cfg);
  const double advance = g.x(traj.states.back().u.argmax()) - g.x(s0.u.argmax());
  EXPECT_NEAR(advance, 1.0, 0.05);
}

// Properties.

TEST(StepperProperties, Deterministic) {
  for (std::uint64_t seed : {5u, 6u, 7u}) {
    SolverConfig cfg = small_config(0.5, 0.01);
    cfg.record_every = 7;
    const State s0 = smooth_data(cfg.grid(), seed);
    const Trajectory a = integrate(s0, cfg);
    const Trajectory b = integrate(s0, cfg);
    EXPECT_EQ(a.times, b.times);
    EXPECT_EQ(a.states, b.states);
  }
}

TEST(StepperProperties, FourthOrderSelfConvergence) {
  for (std::uint64_t seed : {8u, 9u, 10u}) {
    const double dt = 0.04;
    const State s0 = smooth_data(small_config(1.0, dt).grid(), seed);
    const State ref = integrate(s0, small_config(1.0, dt / 16.0)).states.back();
    const double e1 = lp_norm(integrate(s0, small_config(1.0, dt)).states.back().u - ref.u, 2.0);
    const double e2 = lp_norm(integrate(s0, small_config(1.0, dt / 2.0)).states.back().u - ref.u, 2.0);
    const double ratio = e1 / e2;
    EXPECT_GE(ratio, 12.0) << "seed " << seed;
    EXPECT_LE(ratio, 20.0) << "seed " << seed;
  }
}

TEST(StepperProperties, ForwardBackwardRecoversInitialData) {
  for (std::uint64_t seed : {11u, 12u}) {
    const double dt = 0.02;
    const int steps = 50;
    const SolverConfig cfg = small_config(steps * dt, dt);
    const State s0 = smooth_data(cfg.grid(), seed);
    auto rhs = [mode = cfg.dealias](const State& x) { return rhs_uv(x, mode); };
    State s = s0;
    for (int i = 0; i < steps; ++i) s = *rk4_step(s, dt, rhs);
    for (int i = 0; i < steps; ++i) s = *rk4_step(s, -dt, rhs);

    // One-way error estimate from the dt and dt/2 runs.
    const State coarse = integrate(s0, cfg).states.back();
    const State fine = integrate(s0, small_config(steps * dt, dt / 2.0)).states.back();
    const double estimate = sup_diff(coarse, fine);
    EXPECT_LE(sup_diff(s, s0), 10.0 * estimate) << "seed " << seed;
  }
}
