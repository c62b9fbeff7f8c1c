#pragma once

// Closed-form peakons and their mollified counterparts.

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "novikov/dynamics.hpp"
#include "novikov/mollify.hpp"

namespace novikov {

/// u = v = sqrt(c) exp(-d_L(x, x0 + c t)): the line peakon wrapped onto the
/// torus by circle distance.
inline State peakon(double c, double t, const Grid& grid, double x0 = 0.0) {
  if (!(c > 0.0)) throw std::invalid_argument("peakon speed must be positive");
  const double amp = std::sqrt(c);
  const double crest = x0 + c * t;
  Field u = Field::sample(grid, [&](double x) { return amp * std::exp(-grid.circle_distance(x, crest)); });
  Field v = u;
  return {std::move(u), std::move(v)};
}

inline bool is_two_pi(double length) {
  return std::abs(length - 2.0 * std::numbers::pi) <= 1e-12 * 2.0 * std::numbers::pi;
}

/// u = v = sqrt(c)/cosh(pi) * cosh(y - 2 pi floor(y / 2 pi) - pi), y = x - c t.
inline State periodic_peakon(double c, double t, const Grid& grid) {
  if (!(c > 0.0)) throw std::invalid_argument("peakon speed must be positive");
  if (!is_two_pi(grid.length())) {
    throw std::invalid_argument("periodic peakon requires a grid of length 2*pi");
  }
  constexpr double pi = std::numbers::pi;
  const double amp = std::sqrt(c) / std::cosh(pi);
  Field u = Field::sample(grid, [&](double x) {
    const double y = x - c * t;
    return amp * std::cosh(y - 2.0 * pi * std::floor(y / (2.0 * pi)) - pi);
  });
  Field v = u;
  return {std::move(u), std::move(v)};
}

/// The peakon potential 2 sqrt(c) delta(x - x0) as a grid measure: one sample
/// of height 2 sqrt(c) / dx at the grid point nearest x0.
inline Field peakon_potential(double c, const Grid& grid, double x0 = 0.0) {
  if (!(c > 0.0)) throw std::invalid_argument("peakon speed must be positive");
  const double wrapped = x0 - grid.length() * std::floor(x0 / grid.length());
  const auto j = static_cast<std::size_t>(std::llround(wrapped / grid.dx())) % grid.size();
  Field m(grid);
  m[j] = 2.0 * std::sqrt(c) / grid.dx();
  return m;
}

/// Peakon smoothed by rho_n. Built from the potential side: m = n =
/// 2 sqrt(c) rho_n(x - x0) and u = v = helm_inv(m), so the potentials are the
/// non-negative samples of the mollifier itself. For x0 on the grid this is
/// exactly mollify(helm_inv(peakon_potential(c, grid, x0)), n).
inline State mollified_peakon(double c, int n, const Grid& grid, double x0 = 0.0) {
  if (!(c > 0.0)) throw std::invalid_argument("peakon speed must be positive");
  Field m = mollifier(n, grid, x0) * (2.0 * std::sqrt(c));
  Field u = helm_inv(m);
  Field v = u;
  return {std::move(u), std::move(v)};
}

}  // namespace novikov
