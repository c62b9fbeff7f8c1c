#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <vector>

#include "novikov/field.hpp"

namespace novikov::spectral {

using Spectrum = std::vector<std::complex<double>>;

namespace detail {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

// FFTW planning is not thread-safe, execution with the new-array interface is.
// Plans are created once per size under a lock and shared afterwards. They are
// planned FFTW_UNALIGNED so std::vector storage can be passed directly.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  PlanPair get(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    const int size = static_cast<int>(n);
    double* real = fftw_alloc_real(n);
    fftw_complex* cplx = fftw_alloc_complex(n / 2 + 1);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p{fftw_plan_dft_r2c_1d(size, real, cplx, flags),
               fftw_plan_dft_c2r_1d(size, cplx, real, flags)};
    fftw_free(cplx);
    fftw_free(real);
    plans_.emplace(n, p);
    return p;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

  std::mutex mutex_;
  std::map<std::size_t, PlanPair> plans_;
};

}  // namespace detail

/// Unnormalized forward real transform: F_j = sum_l f_l e^{-2 pi i j l / N}, j = 0..N/2.
inline Spectrum forward(std::span<const double> samples) {
  const std::size_t n = samples.size();
  auto plans = detail::PlanCache::instance().get(n);
  Spectrum out(n / 2 + 1);
  // r2c out-of-place leaves the input untouched.
  fftw_execute_dft_r2c(plans.forward, const_cast<double*>(samples.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

inline Spectrum forward(const Field& f) { return forward(f.samples()); }

/// Inverse transform including the 1/N normalization. Consumes the spectrum.
inline Field backward(const Grid& grid, Spectrum spec) {
  const std::size_t n = grid.size();
  auto plans = detail::PlanCache::instance().get(n);
  std::vector<double> out(n);
  fftw_execute_dft_c2r(plans.backward, reinterpret_cast<fftw_complex*>(spec.data()), out.data());
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& v : out) v *= scale;
  return Field(grid, std::move(out));
}

/// i*k for spectral index j, with the Nyquist mode mapped to zero.
inline std::complex<double> derivative_symbol(const Grid& grid, std::size_t j) {
  if (j == grid.size() / 2) return {0.0, 0.0};
  return {0.0, grid.wavenumber(j)};
}

/// Highest index retained by the 2/3 rule.
inline std::size_t two_thirds_cutoff(const Grid& grid) { return grid.size() / 3; }

inline void truncate_two_thirds(const Grid& grid, Spectrum& spec) {
  for (std::size_t j = two_thirds_cutoff(grid) + 1; j < spec.size(); ++j) spec[j] = 0.0;
}

/// Applies a Fourier multiplier symbol(j) to f.
template <class Symbol>
Field apply(const Field& f, Symbol&& symbol) {
  Spectrum spec = forward(f);
  for (std::size_t j = 0; j < spec.size(); ++j) spec[j] *= symbol(j);
  return backward(f.grid(), std::move(spec));
}

}  // namespace novikov::spectral
