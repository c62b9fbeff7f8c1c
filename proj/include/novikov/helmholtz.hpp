#pragma once

// The operator (1 - d^2/dx^2) and its inverse on the periodic grid.
//
// On the line the inverse is convolution with g(x) = exp(-|x|)/2. On a torus
// of length L the Green's function is
//
//   g_L(x) = cosh(d_L(x, 0) - L/2) / (2 sinh(L/2)),
//
// which is what green_kernel samples. helm_inv itself works in Fourier space
// with the multiplier 1 / (1 + k^2).

#include <cmath>

#include "novikov/grid.hpp"

namespace novikov {

inline Field green_kernel(const Grid& grid) {
  const double half = 0.5 * grid.length();
  const double denom = 2.0 * std::sinh(half);
  return Field::sample(grid, [&](double x) {
    return std::cosh(grid.circle_distance(x, 0.0) - half) / denom;
  });
}

inline Field helm_inv(const Field& f) {
  const Grid& g = f.grid();
  return spectral::apply(f, [&](std::size_t j) {
    const double k = g.wavenumber(j);
    return 1.0 / (1.0 + k * k);
  });
}

inline Field helm_apply(const Field& u) {
  const Grid& g = u.grid();
  return spectral::apply(u, [&](std::size_t j) {
    const double k = g.wavenumber(j);
    return 1.0 + k * k;
  });
}

/// Convolution with g_x, computed as d/dx of helm_inv(f).
inline Field conv_gx(const Field& f) {
  const Grid& g = f.grid();
  return spectral::apply(f, [&](std::size_t j) {
    const double k = g.wavenumber(j);
    return spectral::derivative_symbol(g, j) / (1.0 + k * k);
  });
}

}  // namespace novikov
