#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace novikov {

/// Periodic uniform lattice x_j = j * dx on [0, L), j = 0..N-1.
class Grid {
 public:
  static constexpr std::size_t kMinPoints = 16;

  /// Throws std::invalid_argument unless L > 0 and N is a power of two >= 16.
  static Grid make(double length, std::size_t points) {
    if (!(length > 0.0) || !std::isfinite(length)) {
      throw std::invalid_argument("grid length must be positive and finite, got " +
                                  std::to_string(length));
    }
    if (points < kMinPoints || (points & (points - 1)) != 0) {
      throw std::invalid_argument("grid size must be a power of two >= 16, got " +
                                  std::to_string(points));
    }
    return Grid(length, points);
  }

  double length() const { return length_; }
  std::size_t size() const { return points_; }
  double dx() const { return length_ / static_cast<double>(points_); }
  double x(std::size_t j) const { return static_cast<double>(j) * dx(); }

  /// Number of non-negative frequencies kept by a real transform (N/2 + 1).
  std::size_t spectrum_size() const { return points_ / 2 + 1; }
  /// Angular wavenumber 2*pi*j/L of spectral index j.
  double wavenumber(std::size_t j) const {
    return 2.0 * std::numbers::pi * static_cast<double>(j) / length_;
  }

  /// Distance on the circle of circumference L.
  double circle_distance(double a, double b) const {
    double d = std::fmod(std::abs(a - b), length_);
    return std::min(d, length_ - d);
  }

  bool operator==(const Grid&) const = default;

 private:
  Grid(double length, std::size_t points) : length_(length), points_(points) {}

  double length_;
  std::size_t points_;
};

/// Real samples of one periodic function on a Grid.
class Field {
 public:
  explicit Field(const Grid& grid) : grid_(grid), samples_(grid.size(), 0.0) {}

  Field(const Grid& grid, std::vector<double> samples)
      : grid_(grid), samples_(std::move(samples)) {
    if (samples_.size() != grid_.size()) {
      throw std::invalid_argument("field sample count does not match grid");
    }
  }

  static Field constant(const Grid& grid, double value) {
    return Field(grid, std::vector<double>(grid.size(), value));
  }

  template <class F>
  static Field sample(const Grid& grid, F&& f) {
    std::vector<double> s(grid.size());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = f(grid.x(j));
    return Field(grid, std::move(s));
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return samples_.size(); }

  double& operator[](std::size_t j) { return samples_[j]; }
  double operator[](std::size_t j) const { return samples_[j]; }

  std::span<double> samples() { return samples_; }
  std::span<const double> samples() const { return samples_; }

  auto begin() { return samples_.begin(); }
  auto end() { return samples_.end(); }
  auto begin() const { return samples_.begin(); }
  auto end() const { return samples_.end(); }

  bool finite() const {
    return std::all_of(samples_.begin(), samples_.end(),
                       [](double v) { return std::isfinite(v); });
  }

  double max() const { return *std::max_element(samples_.begin(), samples_.end()); }
  double min() const { return *std::min_element(samples_.begin(), samples_.end()); }
  std::size_t argmax() const {
    return static_cast<std::size_t>(
        std::max_element(samples_.begin(), samples_.end()) - samples_.begin());
  }

  Field& operator+=(const Field& o) { return zip(o, std::plus<>{}); }
  Field& operator-=(const Field& o) { return zip(o, std::minus<>{}); }
  Field& operator*=(const Field& o) { return zip(o, std::multiplies<>{}); }
  Field& operator*=(double a) {
    for (auto& v : samples_) v *= a;
    return *this;
  }
  Field& operator+=(double a) {
    for (auto& v : samples_) v += a;
    return *this;
  }

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(Field a, const Field& b) { return a *= b; }
  friend Field operator*(Field a, double s) { return a *= s; }
  friend Field operator*(double s, Field a) { return a *= s; }
  friend Field operator-(Field a) { return a *= -1.0; }

  bool operator==(const Field&) const = default;

 private:
  template <class Op>
  Field& zip(const Field& o, Op op) {
    if (!(o.grid_ == grid_)) throw std::invalid_argument("fields live on different grids");
    for (std::size_t j = 0; j < samples_.size(); ++j) samples_[j] = op(samples_[j], o.samples_[j]);
    return *this;
  }

  Grid grid_;
  std::vector<double> samples_;
};

/// Applies f to every sample.
template <class F>
Field map(const Field& in, F&& f) {
  Field out(in.grid());
  for (std::size_t j = 0; j < in.size(); ++j) out[j] = f(in[j]);
  return out;
}

/// Circular shift by an integer number of samples: out[j] = in[j - shift].
inline Field shift_samples(const Field& in, std::ptrdiff_t shift) {
  const auto n = static_cast<std::ptrdiff_t>(in.size());
  Field out(in.grid());
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    out[static_cast<std::size_t>(((j + shift) % n + n) % n)] = in[static_cast<std::size_t>(j)];
  }
  return out;
}

}  // namespace novikov
