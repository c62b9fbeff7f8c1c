#pragma once

// Shared generators and independent oracles for the unit tests. Generators
// are seeded so every failure is reproducible from the printed seed.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "novikov/novikov.hpp"

namespace testing_support {

using novikov::Field;
using novikov::Grid;
using novikov::State;

inline constexpr double kPi = std::numbers::pi;

/// Random trigonometric polynomial with `modes` modes and decaying amplitudes.
inline Field random_smooth(const Grid& grid, std::mt19937_64& rng, int modes = 6, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> a(modes + 1), b(modes + 1);
  for (int k = 0; k <= modes; ++k) {
    const double decay = scale / (1.0 + k * k);
    a[k] = normal(rng) * decay;
    b[k] = normal(rng) * decay;
  }
  const double base = 2.0 * kPi / grid.length();
  return Field::sample(grid, [&](double x) {
    double s = a[0];
    for (int k = 1; k <= modes; ++k) s += a[k] * std::cos(k * base * x) + b[k] * std::sin(k * base * x);
    return s;
  });
}

/// Square of a random smooth field, so non-negative everywhere.
inline Field random_nonnegative(const Grid& grid, std::mt19937_64& rng, int modes = 6) {
  Field f = random_smooth(grid, rng, modes);
  return novikov::map(f, [](double x) { return x * x; });
}

inline State random_state(const Grid& grid, std::mt19937_64& rng, int modes = 6, double scale = 1.0) {
  return {random_smooth(grid, rng, modes, scale), random_smooth(grid, rng, modes, scale)};
}

/// Direct O(N^2) periodic convolution with the sampled kernel, rectangle rule.
inline Field dense_convolution(const Field& kernel, const Field& f) {
  const std::size_t n = f.size();
  Field out(f.grid());
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += kernel[(i + n - j) % n] * f[j];
    out[i] = s * f.grid().dx();
  }
  return out;
}

/// Fourth-order central finite difference on the periodic grid.
inline Field fd4(const Field& f) {
  const std::size_t n = f.size();
  const double dx = f.grid().dx();
  Field out(f.grid());
  for (std::size_t j = 0; j < n; ++j) {
    const double fm2 = f[(j + n - 2) % n], fm1 = f[(j + n - 1) % n];
    const double fp1 = f[(j + 1) % n], fp2 = f[(j + 2) % n];
    out[j] = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * dx);
  }
  return out;
}

inline double sup_diff(const Field& a, const Field& b) { return novikov::lp_norm(a - b, novikov::kInfinity); }

inline double sup_diff(const State& a, const State& b) { return std::max(sup_diff(a.u, b.u), sup_diff(a.v, b.v)); }

}  // namespace testing_support
