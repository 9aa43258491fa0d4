#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "metric_lab/vector.hpp"

namespace mlab {

namespace detail {

inline double dot(const Vector& x, const Vector& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) s += x[i] * y[i];
  return s;
}

inline double euclidean(const Vector& x, const Vector& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(s);
}

inline double segment_distance(const Vector& q, const Vector& p0, const Vector& p1) {
  const Vector e = p1 - p0;
  const double ee = dot(e, e);
  double s = 0.0;
  if (ee > 0.0) s = std::clamp(dot(q - p0, e) / ee, 0.0, 1.0);
  return euclidean(p0 + s * e, q);
}

}  // namespace detail

/// Euclidean distance from q to the triangle conv{a, b, c}.
///
/// The minimum over the triangle sits either at the interior stationary
/// point of the barycentric least-squares problem or on one of the three
/// edges. Every candidate evaluated is a genuine hull point, so the result
/// never underestimates the true distance.
inline double hull_distance(const Vector& q, const Vector& a, const Vector& b, const Vector& c) {
  detail::require_same_dim(q.dim(), a.dim(), "hull_distance");
  detail::require_same_dim(a.dim(), b.dim(), "hull_distance");
  detail::require_same_dim(a.dim(), c.dim(), "hull_distance");

  double best = std::min({detail::segment_distance(q, a, b), detail::segment_distance(q, b, c),
                          detail::segment_distance(q, a, c)});

  // Orthonormal frame for the plane of the triangle; the Gram determinant
  // loses too many digits on thin triangles.
  const Vector e1 = b - a;
  const Vector e2 = c - a;
  const Vector r = q - a;
  const double len1 = detail::euclidean(b, a);
  if (len1 == 0.0) return best;
  const Vector u1 = e1 / len1;
  Vector w = e2 - detail::dot(e2, u1) * u1;
  const double wlen = std::sqrt(detail::dot(w, w));
  if (!(wlen > 0.0)) return best;
  const Vector u2 = w / wlen;

  // Plane coordinates: a = (0, 0), b = (len1, 0), c = (cx, wlen).
  const double cx = detail::dot(e2, u1);
  const double x = detail::dot(r, u1);
  const double y = detail::dot(r, u2);
  const bool inside = y >= 0.0 && (cx * y - wlen * x) <= 0.0 &&
                      ((cx - len1) * (y - 0.0) - wlen * (x - len1)) >= 0.0;
  if (inside) {
    const Vector residual = r - x * u1 - y * u2;
    best = std::min(best, std::sqrt(detail::dot(residual, residual)));
  }
  return best;
}

/// True when q lies within tol (Euclidean) of the convex hull of {a, b, c}.
inline bool in_triple_hull(const Vector& q, const Vector& a, const Vector& b, const Vector& c,
                           double tol = 1e-9) {
  if (!(tol >= 0.0)) throw domain_error("in_triple_hull: tolerance must be nonnegative");
  return hull_distance(q, a, b, c) <= tol;
}

}  // namespace mlab
