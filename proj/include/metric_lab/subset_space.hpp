#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <utility>
#include <vector>

#include "metric_lab/hull.hpp"
#include "metric_lab/ternary.hpp"
#include "metric_lab/vector.hpp"

namespace mlab {

/// A nonempty set of at most `capacity` points, an element of X(capacity).
///
/// Points are kept sorted lexicographically with exact duplicates removed,
/// so two subsets compare equal iff they hold the same points.
class FiniteSubset {
 public:
  FiniteSubset(std::vector<Vector> points, std::size_t capacity) : capacity_(capacity) {
    if (points.empty()) throw domain_error("FiniteSubset: must be nonempty");
    for (const auto& p : points) detail::require_same_dim(points.front().dim(), p.dim(), "FiniteSubset");
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.size() > capacity) throw domain_error("FiniteSubset: more points than capacity");
    points_ = std::move(points);
  }

  std::size_t size() const noexcept { return points_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t dim() const noexcept { return points_.front().dim(); }
  const std::vector<Vector>& points() const noexcept { return points_; }

  bool contains(const Vector& x) const { return std::binary_search(points_.begin(), points_.end(), x); }

  /// Index of x in points(), or size() if absent.
  std::size_t index_of(const Vector& x) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), x);
    return (it != points_.end() && *it == x) ? static_cast<std::size_t>(it - points_.begin()) : size();
  }

  friend bool operator==(const FiniteSubset& lhs, const FiniteSubset& rhs) {
    return lhs.points_ == rhs.points_;
  }

 private:
  std::vector<Vector> points_;
  std::size_t capacity_;
};

/// max(sup_a inf_b d(a, b), sup_b inf_a d(a, b)).
inline double hausdorff_dist(const FiniteSubset& a, const FiniteSubset& b, const NormSpec& spec) {
  detail::require_same_dim(a.dim(), b.dim(), "hausdorff_dist");
  auto directed = [&](const FiniteSubset& from, const FiniteSubset& to) {
    double worst = 0.0;
    for (const auto& x : from.points()) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& y : to.points()) nearest = std::min(nearest, dist(x, y, spec));
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

/// A map defined on the points of a finite subset; images are stored in the
/// order of domain().points().
class PointMap {
 public:
  PointMap(FiniteSubset domain, std::vector<Vector> images)
      : domain_(std::move(domain)), images_(std::move(images)) {
    if (images_.size() != domain_.size()) throw domain_error("PointMap: map must be total on its domain");
    for (const auto& y : images_) detail::require_same_dim(domain_.dim(), y.dim(), "PointMap");
  }

  const FiniteSubset& domain() const noexcept { return domain_; }
  const std::vector<Vector>& images() const noexcept { return images_; }

  const Vector& operator()(const Vector& x) const {
    const std::size_t i = domain_.index_of(x);
    if (i == domain_.size()) throw domain_error("PointMap: point outside the domain");
    return images_[i];
  }

  /// f(domain) as a subset with the domain's capacity.
  FiniteSubset image() const { return FiniteSubset(images_, domain_.capacity()); }

 private:
  FiniteSubset domain_;
  std::vector<Vector> images_;
};

/// sup_x d(x, f(x)).
inline double displacement(const PointMap& f, const NormSpec& spec) {
  double worst = 0.0;
  for (std::size_t i = 0; i < f.domain().size(); ++i) {
    worst = std::max(worst, dist(f.domain().points()[i], f.images()[i], spec));
  }
  return worst;
}

/// Displacement of an arbitrary map over a list of sample points.
template <class Map>
double sampled_displacement(Map&& f, std::span<const Vector> samples, const NormSpec& spec) {
  double worst = 0.0;
  for (const auto& x : samples) worst = std::max(worst, dist(x, f(x), spec));
  return worst;
}

/// Sends each point of `from` to a nearest point of `to`; ties go to the
/// lexicographically smallest candidate.
inline PointMap nearest_map(const FiniteSubset& from, const FiniteSubset& to, const NormSpec& spec) {
  detail::require_same_dim(from.dim(), to.dim(), "nearest_map");
  std::vector<Vector> images;
  images.reserve(from.size());
  for (const auto& x : from.points()) {
    const Vector* best = &to.points().front();
    double best_d = dist(x, *best, spec);
    for (const auto& y : to.points()) {
      const double d = dist(x, y, spec);
      if (d < best_d) {
        best_d = d;
        best = &y;
      }
    }
    images.push_back(*best);
  }
  return PointMap(from, std::move(images));
}

/// Given f: A -> B and g: B -> A, the map h: B -> B that fixes f(A) and
/// sends every other b to f(g(b)). Its image is exactly f(A).
inline PointMap h_map(const PointMap& f, const PointMap& g) {
  const FiniteSubset& b_set = g.domain();
  const FiniteSubset f_image = f.image();
  std::vector<Vector> images;
  images.reserve(b_set.size());
  for (std::size_t i = 0; i < b_set.size(); ++i) {
    const Vector& b = b_set.points()[i];
    images.push_back(f_image.contains(b) ? b : f(g.images()[i]));
  }
  return PointMap(b_set, std::move(images));
}

/// {incenter_mixer(a, b, c), nagel_comixer(a, b, c)} for an explicit listing.
inline FiniteSubset retract_listing(const Vector& a, const Vector& b, const Vector& c,
                                    const NormSpec& spec) {
  return FiniteSubset({incenter_mixer(a, b, c, spec), nagel_comixer(a, b, c, spec)}, 2);
}

/// E -> {sigma(E), tau(E)}, a retraction X(3) -> X(2).
///
/// Sets with at most two points are returned unchanged; three-point sets
/// are listed in lexicographic order. Coinciding outputs collapse to one
/// point under exact equality.
inline FiniteSubset retraction_3_to_2(const FiniteSubset& e, const NormSpec& spec) {
  if (e.size() > 3) throw domain_error("retraction_3_to_2: set has more than 3 points");
  if (e.size() <= 2) return FiniteSubset(e.points(), 2);
  const auto& p = e.points();
  return retract_listing(p[0], p[1], p[2], spec);
}

/// Lists E as a triple, repeating the last point when |E| < 3.
inline std::array<Vector, 3> listing(const FiniteSubset& e) {
  const auto& p = e.points();
  return {p[0], p[std::min<std::size_t>(1, p.size() - 1)], p[std::min<std::size_t>(2, p.size() - 1)]};
}

/// Intermediate quantities of the bound dH(rho(A), rho(B)) <= 9 delta.
///
/// With f = nearest_map(A, B), g = nearest_map(B, A) and h = h_map(f, g),
/// rho(f(A)) and rho(h(B)) are the same set, so the bound splits into
/// dH(rho(A), rho(f(A))) <= 3 delta and dH(rho(B), rho(h(B))) <= 6 delta.
/// Each half is also replayed one argument at a time: a single step moving
/// one listed point by s may move sigma and tau by at most s.
struct RetractionChain {
  double delta = 0.0;
  double disp_f = 0.0;
  double disp_g = 0.0;
  double disp_h = 0.0;
  double forward = 0.0;   // dH(rho(A), rho(f(A)))
  double backward = 0.0;  // dH(rho(B), rho(h(B)))
  double total = 0.0;     // dH(rho(A), rho(B))
  double step_excess = 0.0;  // max over single steps of (output move - argument move)
  bool images_agree = false;
};

namespace detail {

// Replaces the listed points one at a time and returns the largest excess
// of the output movement over the argument movement.
inline double replay_steps(std::array<Vector, 3> from, const std::array<Vector, 3>& to,
                           const NormSpec& spec) {
  double excess = 0.0;
  Vector s = incenter_mixer(from[0], from[1], from[2], spec);
  Vector t = nagel_comixer(from[0], from[1], from[2], spec);
  for (std::size_t k = 0; k < 3; ++k) {
    const double moved = dist(from[k], to[k], spec);
    from[k] = to[k];
    Vector s2 = incenter_mixer(from[0], from[1], from[2], spec);
    Vector t2 = nagel_comixer(from[0], from[1], from[2], spec);
    excess = std::max(excess, std::max(dist(s, s2, spec), dist(t, t2, spec)) - moved);
    s = std::move(s2);
    t = std::move(t2);
  }
  return excess;
}

}  // namespace detail

inline RetractionChain replay_retraction_chain(const FiniteSubset& a, const FiniteSubset& b,
                                               const NormSpec& spec) {
  RetractionChain chain;
  chain.delta = hausdorff_dist(a, b, spec);
  const PointMap f = nearest_map(a, b, spec);
  const PointMap g = nearest_map(b, a, spec);
  const PointMap h = h_map(f, g);
  chain.disp_f = displacement(f, spec);
  chain.disp_g = displacement(g, spec);
  chain.disp_h = displacement(h, spec);

  const FiniteSubset rho_a = retraction_3_to_2(a, spec);
  const FiniteSubset rho_b = retraction_3_to_2(b, spec);
  const FiniteSubset rho_fa = retraction_3_to_2(FiniteSubset(f.images(), 3), spec);
  const FiniteSubset rho_hb = retraction_3_to_2(FiniteSubset(h.images(), 3), spec);
  chain.forward = hausdorff_dist(rho_a, rho_fa, spec);
  chain.backward = hausdorff_dist(rho_b, rho_hb, spec);
  chain.total = hausdorff_dist(rho_a, rho_b, spec);
  chain.images_agree = rho_fa == rho_hb;

  auto mapped = [](const std::array<Vector, 3>& l, const PointMap& m) {
    return std::array<Vector, 3>{m(l[0]), m(l[1]), m(l[2])};
  };
  const auto la = listing(a);
  const auto lb = listing(b);
  chain.step_excess = std::max(detail::replay_steps(la, mapped(la, f), spec),
                               detail::replay_steps(lb, mapped(lb, h), spec));
  return chain;
}

/// True when every point of `out` lies within tol of conv(E).
inline bool retraction_in_hull(const FiniteSubset& e, const FiniteSubset& out, double tol) {
  const auto [a, b, c] = listing(e);
  return std::all_of(out.points().begin(), out.points().end(),
                     [&](const Vector& q) { return in_triple_hull(q, a, b, c, tol); });
}

}  // namespace mlab
