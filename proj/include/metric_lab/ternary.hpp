#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "metric_lab/vector.hpp"

namespace mlab {

/// Median of three reals.
inline double med3(double a, double b, double c) noexcept {
  return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

/// Weighted average of a, b, c where each vertex is weighted by the length of
/// the opposite side. At a = b = c the weights vanish and a is returned.
inline Vector incenter_mixer(const Vector& a, const Vector& b, const Vector& c,
                             const NormSpec& spec) {
  detail::require_same_dim(a.dim(), b.dim(), "incenter_mixer");
  detail::require_same_dim(a.dim(), c.dim(), "incenter_mixer");
  const double wa = dist(b, c, spec);
  const double wb = dist(a, c, spec);
  const double wc = dist(a, b, spec);
  const double total = wa + wb + wc;
  if (total == 0.0) return a;
  Vector out = Vector::zeros(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = (wa * a[i] + wb * b[i] + wc * c[i]) / total;
  return out;
}

/// a + b + c - 2 * incenter_mixer(a, b, c). In the Euclidean plane this is the
/// Nagel point of the triangle.
inline Vector nagel_comixer(const Vector& a, const Vector& b, const Vector& c,
                            const NormSpec& spec) {
  const Vector s = incenter_mixer(a, b, c, spec);
  Vector out = Vector::zeros(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] + b[i] + c[i] - 2.0 * s[i];
  return out;
}

/// Coordinate-wise median.
inline Vector median_mixer(const Vector& a, const Vector& b, const Vector& c) {
  detail::require_same_dim(a.dim(), b.dim(), "median_mixer");
  detail::require_same_dim(a.dim(), c.dim(), "median_mixer");
  Vector out = Vector::zeros(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = med3(a[i], b[i], c[i]);
  return out;
}

/// a + b + c - 2 med(a, b, c). Maps any additive subgroup of R into itself.
/// Evaluated as lo + hi - mid, grouped so that a repeated argument cancels
/// exactly and anti-absorption holds bit for bit.
inline double group_comixer_1d(double a, double b, double c) noexcept {
  const double lo = std::min({a, b, c});
  const double hi = std::max({a, b, c});
  const double mid = med3(a, b, c);
  return mid - lo < hi - mid ? (lo - mid) + hi : lo + (hi - mid);
}

/// group_comixer_1d applied per coordinate.
inline Vector group_comixer(const Vector& a, const Vector& b, const Vector& c) {
  detail::require_same_dim(a.dim(), b.dim(), "group_comixer");
  detail::require_same_dim(a.dim(), c.dim(), "group_comixer");
  Vector out = Vector::zeros(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = group_comixer_1d(a[i], b[i], c[i]);
  return out;
}

enum class TernaryKind { incenter_mixer, nagel_comixer, median_mixer, group_comixer_1d };

inline constexpr bool is_mixer(TernaryKind k) noexcept {
  return k == TernaryKind::incenter_mixer || k == TernaryKind::median_mixer;
}
inline constexpr bool is_comixer(TernaryKind k) noexcept { return !is_mixer(k); }

/// CLI spelling: incenter, nagel, median, group1d.
inline std::string_view kind_name(TernaryKind k) noexcept {
  switch (k) {
    case TernaryKind::incenter_mixer: return "incenter";
    case TernaryKind::nagel_comixer: return "nagel";
    case TernaryKind::median_mixer: return "median";
    case TernaryKind::group_comixer_1d: return "group1d";
  }
  return "?";
}

inline std::optional<TernaryKind> parse_kind(std::string_view name) noexcept {
  for (auto k : {TernaryKind::incenter_mixer, TernaryKind::nagel_comixer,
                 TernaryKind::median_mixer, TernaryKind::group_comixer_1d}) {
    if (kind_name(k) == name) return k;
  }
  return std::nullopt;
}

/// A ternary operation on a normed space together with the norm it uses.
/// The median and the group co-mixer ignore the norm when evaluating but
/// checks still measure violations with it.
class TernaryOp {
 public:
  TernaryOp(TernaryKind kind, NormSpec spec = {}) : kind_(kind), spec_(std::move(spec)) {}

  TernaryKind kind() const noexcept { return kind_; }
  const NormSpec& spec() const noexcept { return spec_; }

  Vector operator()(const Vector& a, const Vector& b, const Vector& c) const {
    switch (kind_) {
      case TernaryKind::incenter_mixer: return incenter_mixer(a, b, c, spec_);
      case TernaryKind::nagel_comixer: return nagel_comixer(a, b, c, spec_);
      case TernaryKind::median_mixer: return median_mixer(a, b, c);
      case TernaryKind::group_comixer_1d: return group_comixer(a, b, c);
    }
    return a;
  }

 private:
  TernaryKind kind_;
  NormSpec spec_;
};

/// Outcome of an identity check over sample pairs.
struct IdentityCheck {
  bool pass = true;
  double worst_violation = 0.0;
  std::size_t pairs_checked = 0;
  std::optional<std::pair<Vector, Vector>> witness;
};

inline constexpr double kIdentityTolerance = 1e-10;

namespace detail {

// Evaluates the three argument placements (x,x,y), (x,y,x), (y,x,x) and
// measures the distance of each output to `expected(x, y)`.
template <class Expected>
IdentityCheck check_placements(const TernaryOp& op, std::span<const std::pair<Vector, Vector>> samples,
                               Expected expected, double tol) {
  IdentityCheck result;
  for (const auto& [x, y] : samples) {
    const Vector& target = expected(x, y);
    const double v = std::max({dist(op(x, x, y), target, op.spec()),
                               dist(op(x, y, x), target, op.spec()),
                               dist(op(y, x, x), target, op.spec())});
    if (!result.witness || v > result.worst_violation) {
      result.worst_violation = v;
      result.witness.emplace(x, y);
    }
    ++result.pairs_checked;
  }
  result.pass = result.worst_violation <= tol;
  return result;
}

}  // namespace detail

/// op(a,a,b) = op(a,b,a) = op(b,a,a) = a for every sampled (a, b).
inline IdentityCheck check_absorption(const TernaryOp& op,
                                      std::span<const std::pair<Vector, Vector>> samples,
                                      double tol = kIdentityTolerance) {
  return detail::check_placements(
      op, samples, [](const Vector& a, const Vector&) -> const Vector& { return a; }, tol);
}

/// op(a,a,b) = op(a,b,a) = op(b,a,a) = b for every sampled (a, b).
inline IdentityCheck check_anti_absorption(const TernaryOp& op,
                                           std::span<const std::pair<Vector, Vector>> samples,
                                           double tol = kIdentityTolerance) {
  return detail::check_placements(
      op, samples, [](const Vector&, const Vector& b) -> const Vector& { return b; }, tol);
}

/// x -> op(x, a, b). For a co-mixer this swaps a and b and fixes every x when a = b.
inline auto interchange_map(const TernaryOp& op, Vector a, Vector b) {
  if (!is_comixer(op.kind())) {
    throw domain_error("interchange_map: operation must be a co-mixer");
  }
  detail::require_same_dim(a.dim(), b.dim(), "interchange_map");
  return [op, a = std::move(a), b = std::move(b)](const Vector& x) { return op(x, a, b); };
}

/// Which one-variable section of a ternary operation to differentiate:
/// F(x) = incenter_mixer(0, a, x) or G(x) = nagel_comixer(0, a, x).
enum class Section { incenter, nagel };

/// Central-difference estimate of ||D_u Phi(x)|| for Phi = F or G.
///
/// Requires ||a|| = 1 and ||u|| = 1 (to 1e-9) and keeps the stencil
/// x +- h u away from the kinks of the norm at 0 and at a.
inline double derivative_bound_check(Section section, const Vector& a, const Vector& x,
                                     const Vector& u, const NormSpec& spec, double h = 1e-5) {
  detail::require_same_dim(a.dim(), x.dim(), "derivative_bound_check");
  detail::require_same_dim(a.dim(), u.dim(), "derivative_bound_check");
  if (!(h > 0.0)) throw domain_error("derivative_bound_check: step must be positive");
  if (std::abs(norm(a, spec) - 1.0) > 1e-9) {
    throw domain_error("derivative_bound_check: a must have unit norm");
  }
  if (std::abs(norm(u, spec) - 1.0) > 1e-9) {
    throw domain_error("derivative_bound_check: u must have unit norm");
  }
  if (norm(x, spec) <= h || dist(x, a, spec) <= h) {
    throw domain_error("derivative_bound_check: x is within h of a singular point (0 or a)");
  }

  const Vector zero = Vector::zeros(a.dim());
  auto phi = [&](const Vector& y) {
    return section == Section::incenter ? incenter_mixer(zero, a, y, spec)
                                        : nagel_comixer(zero, a, y, spec);
  };
  const Vector forward = phi(x + h * u);
  const Vector backward = phi(x - h * u);
  return dist(forward, backward, spec) / (2.0 * h);
}

}  // namespace mlab
