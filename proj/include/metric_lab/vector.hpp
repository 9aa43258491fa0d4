#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "metric_lab/errors.hpp"

namespace mlab {

/// A point of a finite-dimensional real normed space.
///
/// Coordinates are checked to be finite on construction; arithmetic is
/// elementwise and requires equal dimensions.
class Vector {
 public:
  explicit Vector(std::vector<double> coords) : coords_(std::move(coords)) { validate(); }
  Vector(std::initializer_list<double> coords) : coords_(coords) { validate(); }

  static Vector zeros(std::size_t dim) { return Vector(std::vector<double>(dim, 0.0)); }

  std::size_t dim() const noexcept { return coords_.size(); }
  std::span<const double> coords() const noexcept { return coords_; }

  double operator[](std::size_t i) const noexcept { return coords_[i]; }
  double& operator[](std::size_t i) noexcept { return coords_[i]; }

  Vector& operator+=(const Vector& rhs) {
    detail::require_same_dim(dim(), rhs.dim(), "Vector::operator+=");
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += rhs.coords_[i];
    return *this;
  }
  Vector& operator-=(const Vector& rhs) {
    detail::require_same_dim(dim(), rhs.dim(), "Vector::operator-=");
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= rhs.coords_[i];
    return *this;
  }
  Vector& operator*=(double s) noexcept {
    for (double& x : coords_) x *= s;
    return *this;
  }
  Vector& operator/=(double s) noexcept {
    for (double& x : coords_) x /= s;
    return *this;
  }

  friend Vector operator+(Vector lhs, const Vector& rhs) { return lhs += rhs; }
  friend Vector operator-(Vector lhs, const Vector& rhs) { return lhs -= rhs; }
  friend Vector operator-(Vector v) { return v *= -1.0; }
  friend Vector operator*(Vector v, double s) noexcept { return v *= s; }
  friend Vector operator*(double s, Vector v) noexcept { return v *= s; }
  friend Vector operator/(Vector v, double s) noexcept { return v /= s; }

  // Exact coordinate equality; ordering is lexicographic on coordinates.
  friend bool operator==(const Vector&, const Vector&) = default;
  friend auto operator<=>(const Vector& lhs, const Vector& rhs) {
    return std::lexicographical_compare_three_way(lhs.coords_.begin(), lhs.coords_.end(),
                                                  rhs.coords_.begin(), rhs.coords_.end(),
                                                  [](double x, double y) {
                                                    // coordinates are finite, so this is total
                                                    return x < y    ? std::weak_ordering::less
                                                           : y < x ? std::weak_ordering::greater
                                                                   : std::weak_ordering::equivalent;
                                                  });
  }

 private:
  void validate() const {
    if (coords_.empty()) throw domain_error("Vector: dimension must be at least 1");
    for (double x : coords_) {
      if (!std::isfinite(x)) throw domain_error("Vector: coordinates must be finite");
    }
  }

  std::vector<double> coords_;
};

/// A (possibly weighted) p-norm, p in [1, inf].
///
/// The max norm is its own case rather than a large exponent. Weighted
/// forms are (sum w_i |v_i|^p)^(1/p) and max_i w_i |v_i|.
class NormSpec {
 public:
  NormSpec() = default;

  static NormSpec lp(double p, std::vector<double> weights = {}) {
    if (!(p >= 1.0) || !std::isfinite(p)) {
      throw domain_error("NormSpec: exponent must be a finite number >= 1 (use max() for inf)");
    }
    NormSpec spec;
    spec.p_ = p;
    spec.set_weights(std::move(weights));
    return spec;
  }
  static NormSpec max(std::vector<double> weights = {}) {
    NormSpec spec;
    spec.is_max_ = true;
    spec.p_ = std::numeric_limits<double>::infinity();
    spec.set_weights(std::move(weights));
    return spec;
  }

  bool is_max() const noexcept { return is_max_; }
  /// Exponent; +inf for the max norm.
  double exponent() const noexcept { return p_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  bool weighted() const noexcept { return !weights_.empty(); }

  friend bool operator==(const NormSpec&, const NormSpec&) = default;

 private:
  void set_weights(std::vector<double> weights) {
    for (double w : weights) {
      if (!(w > 0.0) || !std::isfinite(w)) throw domain_error("NormSpec: weights must be positive");
    }
    weights_ = std::move(weights);
  }

  double p_ = 2.0;
  bool is_max_ = false;
  std::vector<double> weights_;
};

namespace detail {

template <class Coord>
double norm_impl(std::size_t n, Coord coord, const NormSpec& spec) {
  const auto& w = spec.weights();
  if (!w.empty()) require_same_dim(w.size(), n, "norm: weights");
  auto weight = [&](std::size_t i) { return w.empty() ? 1.0 : w[i]; };

  if (spec.is_max()) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, weight(i) * std::abs(coord(i)));
    return m;
  }
  const double p = spec.exponent();
  if (p == 1.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += weight(i) * std::abs(coord(i));
    return s;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += weight(i) * coord(i) * coord(i);
    if (std::isfinite(s) && s > 1e-280) return std::sqrt(s);
    // overflow or underflow: take the rescaled route below
  }
  // General p: scale by the largest term w_i^(1/p)|v_i| so the powers stay in range.
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    scale = std::max(scale, std::pow(weight(i), 1.0 / p) * std::abs(coord(i)));
  }
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += weight(i) * std::pow(std::abs(coord(i)) / scale, p);
  return scale * std::pow(s, 1.0 / p);
}

}  // namespace detail

inline double norm(const Vector& v, const NormSpec& spec) {
  return detail::norm_impl(v.dim(), [&](std::size_t i) { return v[i]; }, spec);
}

/// d(a, b) = ||a - b||, computed without materializing the difference.
inline double dist(const Vector& a, const Vector& b, const NormSpec& spec) {
  detail::require_same_dim(a.dim(), b.dim(), "dist");
  return detail::norm_impl(a.dim(), [&](std::size_t i) { return a[i] - b[i]; }, spec);
}

}  // namespace mlab
