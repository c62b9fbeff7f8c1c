#pragma once

// Calculus on the periodic lattice: spectral derivative, rectangle-rule
// quadrature and discrete norms.

#include <cmath>
#include <limits>
#include <stdexcept>

#include "novikov/field.hpp"
#include "novikov/spectral.hpp"

namespace novikov {

inline Grid make_grid(double length, std::size_t points) { return Grid::make(length, points); }

/// Spectral first derivative. The Nyquist mode is dropped.
inline Field deriv(const Field& f) {
  const Grid& g = f.grid();
  return spectral::apply(f, [&](std::size_t j) { return spectral::derivative_symbol(g, j); });
}

/// Rectangle rule dx * sum f_j.
inline double integrate_x(const Field& f) {
  double sum = 0.0;
  for (double v : f) sum += v;
  return sum * f.grid().dx();
}

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// (dx * sum |f|^p)^(1/p), or max |f| for p = infinity.
inline double lp_norm(const Field& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm requires p >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
  }
  double sum = 0.0;
  if (p == 1.0) {
    for (double v : f) sum += std::abs(v);
    return sum * f.grid().dx();
  }
  if (p == 2.0) {
    for (double v : f) sum += v * v;
    return std::sqrt(sum * f.grid().dx());
  }
  for (double v : f) sum += std::pow(std::abs(v), p);
  return std::pow(sum * f.grid().dx(), 1.0 / p);
}

inline double h1_norm(const Field& f) {
  const Field fx = deriv(f);
  double sum = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) sum += f[j] * f[j] + fx[j] * fx[j];
  return std::sqrt(sum * f.grid().dx());
}

}  // namespace novikov
