#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "novikov/grid.hpp"

namespace novikov {

/// The standard bump exp(1/(x^2 - 1)) on |x| < 1, zero elsewhere.
inline double bump(double x) {
  const double x2 = x * x;
  if (x2 >= 1.0) return 0.0;
  return std::exp(1.0 / (x2 - 1.0));
}

/// d/dx bump(x) = bump(x) * (-2x / (x^2 - 1)^2).
inline double bump_derivative(double x) {
  const double x2 = x * x;
  if (x2 >= 1.0) return 0.0;
  const double s = x2 - 1.0;
  return std::exp(1.0 / s) * (-2.0 * x / (s * s));
}

/// The kernel of support radius 1/n keeps at least one off-centre sample on
/// each side only if 1/n > dx.
inline bool mollifier_resolved(int n, const Grid& grid) {
  return n >= 1 && 1.0 / static_cast<double>(n) > grid.dx();
}

/// rho_n(x - center) with rho_n(x) = n * bump(n x) / (integral of bump),
/// renormalized so its rectangle-rule integral is exactly one.
inline Field mollifier(int n, const Grid& grid, double center = 0.0) {
  if (!mollifier_resolved(n, grid)) {
    throw std::invalid_argument("mollifier index " + std::to_string(n) +
                                " is not resolved by grid spacing " + std::to_string(grid.dx()));
  }
  const double scale = static_cast<double>(n);
  Field rho = Field::sample(grid, [&](double x) { return bump(scale * grid.circle_distance(x, center)); });
  const double mass = integrate_x(rho);
  rho *= 1.0 / mass;
  return rho;
}

/// Periodic convolution rho_n * f, evaluated through the convolution theorem.
inline Field mollify(const Field& f, int n) {
  const Grid& grid = f.grid();
  const spectral::Spectrum kernel = spectral::forward(mollifier(n, grid));
  const double dx = grid.dx();
  return spectral::apply(f, [&](std::size_t j) { return kernel[j] * dx; });
}

}  // namespace novikov
