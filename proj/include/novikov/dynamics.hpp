#pragma once

// Right-hand sides of the two-component Novikov system
//
//   m_t + 3 u_x v m + u v m_x = 0,   m = u - u_xx,
//   n_t + 3 v_x u n + u v n_x = 0,   n = v - v_xx,
//
// in the potential form (rhs_m) and in the nonlocal velocity form (rhs_uv)
//
//   u_t = -( g_x * (u v m) + 2 g * (u_x v m) - g * (u v_x m) ),
//
// with the v equation obtained by exchanging (u, m) and (v, n).

#include <cstddef>

#include "novikov/helmholtz.hpp"

namespace novikov {

struct State {
  Field u;
  Field v;

  const Grid& grid() const { return u.grid(); }
  bool finite() const { return u.finite() && v.finite(); }

  State& operator+=(const State& o) {
    u += o.u;
    v += o.v;
    return *this;
  }
  State& operator*=(double a) {
    u *= a;
    v *= a;
    return *this;
  }
  friend State operator+(State a, const State& b) { return a += b; }
  friend State operator*(double a, State s) { return s *= a; }
  bool operator==(const State&) const = default;
};

struct Potentials {
  Field m;
  Field n;
};

/// Auto resolves to TwoThirds for N >= 256 and Off otherwise.
enum class Dealias { Auto, Off, TwoThirds };

inline bool dealias_enabled(Dealias mode, const Grid& grid) {
  switch (mode) {
    case Dealias::Off:
      return false;
    case Dealias::TwoThirds:
      return true;
    case Dealias::Auto:
      break;
  }
  return grid.size() >= 256;
}

inline Potentials potentials(const State& s) { return {helm_apply(s.u), helm_apply(s.v)}; }

namespace detail {

// A velocity component prepared for product formation: the (possibly
// truncated) samples, their derivative, and the potential.
struct Resolved {
  Field value;
  Field slope;
  Field potential;
};

inline Resolved resolve(const Field& f, bool dealias) {
  const Grid& g = f.grid();
  spectral::Spectrum spec = spectral::forward(f);
  if (dealias) spectral::truncate_two_thirds(g, spec);
  spectral::Spectrum slope = spec;
  spectral::Spectrum potential = spec;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    const double k = g.wavenumber(j);
    slope[j] *= spectral::derivative_symbol(g, j);
    potential[j] *= 1.0 + k * k;
  }
  Field value = dealias ? spectral::backward(g, std::move(spec)) : f;
  return {std::move(value), spectral::backward(g, std::move(slope)),
          spectral::backward(g, std::move(potential))};
}

// -( g_x * (a b p) + 2 g * (a_x b p) - g * (a b_x p) ), evaluated with a single
// inverse transform. Calling it with the roles of (u, m) and (v, n) swapped
// performs bit-for-bit the same arithmetic, so u = v stays exactly u = v.
inline Field nonlocal_tendency(const Resolved& a, const Resolved& b, bool dealias) {
  const Grid& g = a.value.grid();
  const spectral::Spectrum transport = spectral::forward(a.value * b.value * a.potential);
  const spectral::Spectrum stretch = spectral::forward(a.slope * b.value * a.potential);
  const spectral::Spectrum counter = spectral::forward(a.value * b.slope * a.potential);
  const std::size_t cutoff = dealias ? spectral::two_thirds_cutoff(g) : transport.size();
  spectral::Spectrum out(transport.size());
  for (std::size_t j = 0; j < out.size() && j <= cutoff; ++j) {
    const double k = g.wavenumber(j);
    out[j] = -(spectral::derivative_symbol(g, j) * transport[j] + 2.0 * stretch[j] - counter[j]) /
             (1.0 + k * k);
  }
  return spectral::backward(g, std::move(out));
}

// -(3 a_x b p + a b p_x) for one potential component.
inline Field local_tendency(const Resolved& a, const Resolved& b, const Field& potential_slope,
                            bool dealias) {
  const Grid& g = a.value.grid();
  Field product = 3.0 * (a.slope * b.value * a.potential) + a.value * b.value * potential_slope;
  if (dealias) {
    spectral::Spectrum spec = spectral::forward(product);
    spectral::truncate_two_thirds(g, spec);
    product = spectral::backward(g, std::move(spec));
  }
  return -product;
}

}  // namespace detail

/// Tendencies (dm/dt, dn/dt) of the potential form.
inline Potentials rhs_m(const State& s, const Potentials& p, Dealias mode = Dealias::Auto) {
  const bool dealias = dealias_enabled(mode, s.grid());
  detail::Resolved u = detail::resolve(s.u, dealias);
  detail::Resolved v = detail::resolve(s.v, dealias);
  // The potentials carried in p take precedence over the ones implied by s.
  auto truncated = [&](const Field& f) {
    if (!dealias) return f;
    spectral::Spectrum spec = spectral::forward(f);
    spectral::truncate_two_thirds(s.grid(), spec);
    return spectral::backward(s.grid(), std::move(spec));
  };
  u.potential = truncated(p.m);
  v.potential = truncated(p.n);
  const Field mx = deriv(u.potential);
  const Field nx = deriv(v.potential);
  return {detail::local_tendency(u, v, mx, dealias), detail::local_tendency(v, u, nx, dealias)};
}

/// Tendencies (du/dt, dv/dt) of the nonlocal form. This is the formulation
/// the stepper integrates.
inline State rhs_uv(const State& s, Dealias mode = Dealias::Auto) {
  const bool dealias = dealias_enabled(mode, s.grid());
  const detail::Resolved u = detail::resolve(s.u, dealias);
  const detail::Resolved v = detail::resolve(s.v, dealias);
  return {detail::nonlocal_tendency(u, v, dealias), detail::nonlocal_tendency(v, u, dealias)};
}

}  // namespace novikov
