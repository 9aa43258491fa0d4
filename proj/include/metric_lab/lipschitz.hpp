#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "metric_lab/interval_set.hpp"
#include "metric_lab/random.hpp"
#include "metric_lab/subset_space.hpp"
#include "metric_lab/ternary.hpp"

namespace mlab {

/// Result of a sampling search for the worst ratio d(f(x), f(y)) / d(x, y).
///
/// A passing report means no violation was found among samples_used
/// draws, not that the bound is proven. The witness holds the arguments
/// that produced `estimate`, in the order documented by each estimator.
template <class Point>
struct LipschitzReport {
  double estimate = 0.0;
  std::vector<Point> witness;
  std::uint64_t samples_used = 0;
  double claimed_bound = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

template <class S>
concept SampleSpace = requires(const S& s, Rng& rng, const typename S::point_type& p) {
  { s.sample(rng) } -> std::convertible_to<typename S::point_type>;
  { s.distance(p, p) } -> std::convertible_to<double>;
};

/// Spaces that can draw a point near a given one (log-uniform radius).
template <class S>
concept PerturbableSpace = SampleSpace<S> && requires(const S& s, Rng& rng, const typename S::point_type& p) {
  { s.perturb(p, rng) } -> std::convertible_to<typename S::point_type>;
};

/// Spaces whose points have real coordinates the hill climber can nudge.
template <class S>
concept CoordinateSpace =
    SampleSpace<S> && requires(const S& s, const typename S::point_type& p, std::size_t i, double d) {
      { s.coordinates() } -> std::convertible_to<std::size_t>;
      { s.nudge(p, i, d) } -> std::same_as<std::optional<typename S::point_type>>;
      { s.initial_step() } -> std::convertible_to<double>;
    };

/// The box [-radius, radius]^dim of a normed space.
struct VectorSpace {
  using point_type = Vector;

  std::size_t dim = 2;
  NormSpec spec;
  double radius = 1.0;
  double min_separation = 1e-6;

  Vector sample(Rng& rng) const { return rng.in_box(dim, radius); }
  Vector perturb(const Vector& p, Rng& rng) const {
    return rng.near(p, min_separation, 2.0 * radius, radius);
  }
  double distance(const Vector& x, const Vector& y) const { return dist(x, y, spec); }

  std::size_t coordinates() const { return dim; }
  std::optional<Vector> nudge(const Vector& p, std::size_t i, double delta) const {
    const double v = p[i] + delta;
    if (std::abs(v) > radius) return std::nullopt;
    Vector q = p;
    q[i] = v;
    return q;
  }
  double initial_step() const { return 0.1 * radius; }
};

/// Random finite interval unions with at most max_intervals pieces and
/// uniform endpoints, under rho.
struct IntervalSetSpace {
  using point_type = IntervalSet;

  std::size_t max_intervals = 6;
  double min_separation = 1e-6;

  IntervalSet sample(Rng& rng) const {
    const std::size_t k = rng.below(max_intervals + 1);
    std::vector<double> ends(2 * k);
    for (double& e : ends) e = rng.uniform();
    std::sort(ends.begin(), ends.end());
    std::vector<Interval> raw;
    for (std::size_t i = 0; i < k; ++i) raw.push_back({ends[2 * i], ends[2 * i + 1]});
    return IntervalSet::canonicalize(std::move(raw));
  }
  // Flips a short random interval in or out of the set.
  IntervalSet perturb(const IntervalSet& a, Rng& rng) const {
    const double lo_w = std::max(min_separation, 1e-12);
    const double w = lo_w * std::pow(0.5 / lo_w, rng.uniform());
    const double u = rng.uniform(0.0, 1.0 - w);
    return sym_diff(a, IntervalSet::canonicalize({{u, std::min(1.0, u + w)}}));
  }
  double distance(const IntervalSet& a, const IntervalSet& b) const { return rho(a, b); }
};

/// Classes of random interval sets under the quotient metric.
struct QuotientSpace {
  using point_type = QuotientClass;

  IntervalSetSpace sets;

  QuotientClass sample(Rng& rng) const { return QuotientClass::of(sets.sample(rng)); }
  QuotientClass perturb(const QuotientClass& x, Rng& rng) const {
    return QuotientClass::of(sets.perturb(x.rep(), rng));
  }
  double distance(const QuotientClass& x, const QuotientClass& y) const { return quotient_dist(x, y); }
};

/// Elements of X(3) over the box, under the Hausdorff metric. A fraction
/// `degenerate_rate` of draws has one or two points.
struct SubsetSpace {
  using point_type = FiniteSubset;

  std::size_t dim = 2;
  NormSpec spec;
  double radius = 1.0;
  double min_separation = 1e-6;
  double degenerate_rate = 0.2;

  FiniteSubset sample(Rng& rng) const {
    const std::size_t n = rng.bernoulli(degenerate_rate) ? 1 + rng.below(2) : 3;
    std::vector<Vector> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back(rng.in_box(dim, radius));
    return FiniteSubset(std::move(pts), 3);
  }
  // Moves every point a little; occasionally drops a point or splits one.
  FiniteSubset perturb(const FiniteSubset& e, Rng& rng) const {
    std::vector<Vector> pts;
    for (const auto& p : e.points()) pts.push_back(rng.near(p, min_separation, 2.0 * radius, radius));
    if (pts.size() > 1 && rng.bernoulli(0.1)) pts.pop_back();
    if (pts.size() < 3 && rng.bernoulli(0.1)) {
      pts.push_back(rng.near(pts.front(), min_separation, 2.0 * radius, radius));
    }
    return FiniteSubset(std::move(pts), 3);
  }
  double distance(const FiniteSubset& a, const FiniteSubset& b) const {
    return hausdorff_dist(a, b, spec);
  }

  std::size_t coordinates() const { return 3 * dim; }
  std::optional<FiniteSubset> nudge(const FiniteSubset& e, std::size_t i, double delta) const {
    const std::size_t which = i / dim;
    if (which >= e.size()) return std::nullopt;
    std::vector<Vector> pts = e.points();
    const double v = pts[which][i % dim] + delta;
    if (std::abs(v) > radius) return std::nullopt;
    pts[which][i % dim] = v;
    return FiniteSubset(std::move(pts), 3);
  }
  double initial_step() const { return 0.1 * radius; }
};

namespace detail {

inline constexpr std::uint64_t kChunkSize = 4096;
inline constexpr std::size_t kRefineSeeds = 10;
inline constexpr int kRefineSteps = 100;
inline constexpr double kStepDecay = 0.7;

template <class Point>
struct Scored {
  double ratio;
  std::uint64_t index;
  std::vector<Point> args;
};

// Larger ratio first; ties go to the earlier sample so merges are order-free.
template <class Point>
bool ranks_before(const Scored<Point>& x, const Scored<Point>& y) {
  return x.ratio > y.ratio || (x.ratio == y.ratio && x.index < y.index);
}

template <class Point>
void keep_top(std::vector<Scored<Point>>& top, Scored<Point> s, std::size_t keep) {
  if (top.size() == keep && !ranks_before(s, top.back())) return;
  top.insert(std::upper_bound(top.begin(), top.end(), s, ranks_before<Point>), std::move(s));
  if (top.size() > keep) top.pop_back();
}

struct NoStats {
  template <class Args>
  void add(const Args&, double) {}
  void merge(const NoStats&) {}
};

// Draws cfg.count argument tuples in fixed-size chunks, one Rng stream per
// chunk, and returns the `keep` best. `ratio` returns nullopt for tuples
// violating the separation contract; those are redrawn. Per-chunk stats start
// as copies of `stats` and are merged back in chunk order.
template <class Point, class Stats, class Draw, class Ratio>
std::vector<Scored<Point>> sample_top(const SamplerConfig& cfg, std::size_t keep, Stats& stats,
                                      Draw&& draw, Ratio&& ratio) {
  const std::size_t chunks = static_cast<std::size_t>((cfg.count + kChunkSize - 1) / kChunkSize);
  std::vector<std::vector<Scored<Point>>> tops(chunks);
  const Stats prototype = stats;
  std::vector<Stats> chunk_stats(chunks, prototype);
  for_each_chunk(chunks, [&](std::size_t k) {
    Rng rng(cfg.seed, k);
    const std::uint64_t begin = k * kChunkSize;
    const std::uint64_t end = std::min<std::uint64_t>(cfg.count, begin + kChunkSize);
    for (std::uint64_t i = begin; i < end; ++i) {
      std::vector<Point> args;
      std::optional<double> r;
      do {
        args = draw(rng);
        r = ratio(args);
      } while (!r);
      const double value = std::isnan(*r) ? std::numeric_limits<double>::infinity() : *r;
      chunk_stats[k].add(args, value);
      keep_top(tops[k], Scored<Point>{value, i, std::move(args)}, keep);
    }
  });
  std::vector<Scored<Point>> merged;
  for (std::size_t k = 0; k < chunks; ++k) {
    stats.merge(chunk_stats[k]);
    for (auto& s : tops[k]) keep_top(merged, std::move(s), keep);
  }
  return merged;
}

// Greedy coordinate ascent on the ratio: each step tries +-step on every
// coordinate of every argument and moves to the best improvement; the step
// shrinks by kStepDecay whenever nothing improves.
template <CoordinateSpace Space, class Ratio>
Scored<typename Space::point_type> hill_climb(const Space& space,
                                              Scored<typename Space::point_type> s,
                                              Ratio&& ratio) {
  using Point = typename Space::point_type;
  const std::size_t per_point = space.coordinates();
  const std::size_t total = per_point * s.args.size();
  double step = space.initial_step();
  for (int it = 0; it < kRefineSteps; ++it) {
    std::optional<Scored<Point>> best;
    for (std::size_t c = 0; c < total; ++c) {
      for (double sign : {1.0, -1.0}) {
        auto moved = space.nudge(s.args[c / per_point], c % per_point, sign * step);
        if (!moved) continue;
        std::vector<Point> args = s.args;
        args[c / per_point] = std::move(*moved);
        const auto r = ratio(args);
        if (r && !std::isnan(*r) && *r > (best ? best->ratio : s.ratio)) {
          best = Scored<Point>{*r, s.index, std::move(args)};
        }
      }
    }
    if (best) {
      s = std::move(*best);
    } else {
      step *= kStepDecay;
    }
  }
  return s;
}

template <class Space, class Stats, class Draw, class Ratio>
LipschitzReport<typename Space::point_type> run_estimator(const Space& space, const SamplerConfig& cfg,
                                                          double claimed_bound, double tolerance,
                                                          Stats& stats, Draw&& draw, Ratio&& ratio) {
  using Point = typename Space::point_type;
  cfg.validate();
  auto top = sample_top<Point>(cfg, kRefineSeeds, stats, draw, ratio);
  if constexpr (CoordinateSpace<Space>) {
    std::vector<Scored<Point>> refined;
    for (auto& s : top) keep_top(refined, hill_climb(space, std::move(s), ratio), kRefineSeeds);
    top = std::move(refined);
  }
  LipschitzReport<Point> report;
  report.samples_used = cfg.count;
  report.claimed_bound = claimed_bound;
  report.tolerance = tolerance;
  if (!top.empty()) {
    report.estimate = top.front().ratio;
    report.witness = std::move(top.front().args);
  }
  report.pass = report.estimate <= claimed_bound + tolerance;
  return report;
}

template <class Space>
typename Space::point_type draw_partner(const Space& space, const typename Space::point_type& p,
                                        Rng& rng) {
  if constexpr (PerturbableSpace<Space>) {
    if (rng.bernoulli(0.5)) return space.perturb(p, rng);
  }
  return space.sample(rng);
}

inline void require_arg_index(int arg_index) {
  if (arg_index < 1 || arg_index > 3) throw domain_error("arg_index must be 1, 2 or 3");
}

}  // namespace detail

/// Worst observed d(op(.., x', ..), op(.., x, ..)) / d(x', x) when only
/// argument `arg_index` (1-based) changes.
///
/// Witness layout: (a, b, c, replacement for argument arg_index).
template <SampleSpace Space, class Op>
LipschitzReport<typename Space::point_type> estimate_per_arg_lipschitz(
    const Space& space, Op&& op, int arg_index, const SamplerConfig& cfg, double claimed_bound,
    double tolerance) {
  using Point = typename Space::point_type;
  detail::require_arg_index(arg_index);
  const std::size_t k = static_cast<std::size_t>(arg_index - 1);
  auto draw = [&](Rng& rng) {
    std::vector<Point> args{space.sample(rng), space.sample(rng), space.sample(rng)};
    args.push_back(detail::draw_partner(space, args[k], rng));
    return args;
  };
  auto ratio = [&](const std::vector<Point>& w) -> std::optional<double> {
    const double den = space.distance(w[k], w[3]);
    if (!(den >= cfg.min_separation) || den == 0.0) return std::nullopt;
    std::array<const Point*, 3> moved{&w[0], &w[1], &w[2]};
    moved[k] = &w[3];
    const double num = space.distance(op(w[0], w[1], w[2]), op(*moved[0], *moved[1], *moved[2]));
    return num / den;
  };
  detail::NoStats stats;
  return detail::run_estimator(space, cfg, claimed_bound, tolerance, stats, draw, ratio);
}

/// Worst observed d(op(a,b,c), op(a',b',c')) / max(d(a,a'), d(b,b'), d(c,c')).
///
/// Witness layout: (a, b, c, a', b', c').
template <SampleSpace Space, class Op>
LipschitzReport<typename Space::point_type> estimate_joint_lipschitz(const Space& space, Op&& op,
                                                                     const SamplerConfig& cfg,
                                                                     double claimed_bound,
                                                                     double tolerance) {
  using Point = typename Space::point_type;
  auto draw = [&](Rng& rng) {
    std::vector<Point> args{space.sample(rng), space.sample(rng), space.sample(rng)};
    for (std::size_t i = 0; i < 3; ++i) args.push_back(detail::draw_partner(space, args[i], rng));
    return args;
  };
  auto ratio = [&](const std::vector<Point>& w) -> std::optional<double> {
    const double den = std::max({space.distance(w[0], w[3]), space.distance(w[1], w[4]),
                                 space.distance(w[2], w[5])});
    if (!(den >= cfg.min_separation) || den == 0.0) return std::nullopt;
    return space.distance(op(w[0], w[1], w[2]), op(w[3], w[4], w[5])) / den;
  };
  detail::NoStats stats;
  return detail::run_estimator(space, cfg, claimed_bound, tolerance, stats, draw, ratio);
}

inline constexpr double kRatioTolerance = 1e-6;

inline VectorSpace vector_space(const SamplerConfig& cfg, const NormSpec& spec) {
  return {cfg.dim, spec, cfg.box_radius, cfg.min_separation};
}

/// Per-argument estimate for a ternary operation on R^dim under op.spec().
/// The default bound 1 is the separate 1-Lipschitz property shared by all
/// four operations.
inline LipschitzReport<Vector> estimate_per_arg_lipschitz(const TernaryOp& op, int arg_index,
                                                          const SamplerConfig& cfg,
                                                          double claimed_bound = 1.0,
                                                          double tolerance = kRatioTolerance) {
  return estimate_per_arg_lipschitz(vector_space(cfg, op.spec()), op, arg_index, cfg, claimed_bound,
                                    tolerance);
}

/// Bound checked by default for joint perturbations: 1 for the median in
/// the max norm, otherwise 3 from chaining three single-argument steps.
inline double default_joint_bound(const TernaryOp& op) {
  return op.kind() == TernaryKind::median_mixer && op.spec().is_max() ? 1.0 : 3.0;
}

inline LipschitzReport<Vector> estimate_joint_lipschitz(const TernaryOp& op, const SamplerConfig& cfg,
                                                        std::optional<double> claimed_bound = {},
                                                        double tolerance = kRatioTolerance) {
  return estimate_joint_lipschitz(vector_space(cfg, op.spec()), op, cfg,
                                  claimed_bound.value_or(default_joint_bound(op)), tolerance);
}

/// Lipschitz report for the retraction X(3) -> X(2) plus the intermediate
/// bounds of its proof, accumulated over every sampled pair.
struct RetractionReport {
  LipschitzReport<FiniteSubset> lipschitz;  // witness: (E, E')
  double max_forward_ratio = 0.0;   // dH(rho(A), rho(f(A))) / delta, bound 3
  double max_backward_ratio = 0.0;  // dH(rho(B), rho(h(B))) / delta, bound 6
  double max_step_excess = 0.0;     // single-argument step excess, bound 0
  bool images_agree = true;         // rho(f(A)) == rho(h(B)) on every pair
  std::uint64_t hull_failures = 0;  // outputs farther than hull_tol from conv(E)
  double hull_tol = 1e-8;

  bool chain_pass(double tol) const {
    return images_agree && max_forward_ratio <= 3.0 + tol && max_backward_ratio <= 6.0 + tol &&
           max_step_excess <= tol;
  }
  bool pass(double tol) const { return lipschitz.pass && chain_pass(tol) && hull_failures == 0; }
};

namespace detail {

struct RetractionStats {
  NormSpec spec;
  double hull_tol = 1e-8;
  double forward = 0.0;
  double backward = 0.0;
  double excess = 0.0;
  bool agree = true;
  std::uint64_t hull_failures = 0;

  void add(const std::vector<FiniteSubset>& pair, double) {
    const RetractionChain chain = replay_retraction_chain(pair[0], pair[1], spec);
    forward = std::max(forward, chain.forward / chain.delta);
    backward = std::max(backward, chain.backward / chain.delta);
    excess = std::max(excess, chain.step_excess);
    agree = agree && chain.images_agree;
    for (const auto& e : pair) {
      if (!retraction_in_hull(e, retraction_3_to_2(e, spec), hull_tol)) ++hull_failures;
    }
  }
  void merge(const RetractionStats& other) {
    forward = std::max(forward, other.forward);
    backward = std::max(backward, other.backward);
    excess = std::max(excess, other.excess);
    agree = agree && other.agree;
    hull_failures += other.hull_failures;
  }
};

}  // namespace detail

/// Samples pairs E, E' of X(3) and reports max dH(rho(E), rho(E')) / dH(E, E').
inline RetractionReport estimate_retraction_lipschitz(const SamplerConfig& cfg, const NormSpec& spec,
                                                      double claimed_bound = 9.0,
                                                      double tolerance = kRatioTolerance,
                                                      double hull_tol = 1e-8) {
  const SubsetSpace space{cfg.dim, spec, cfg.box_radius, cfg.min_separation};
  auto draw = [&](Rng& rng) {
    std::vector<FiniteSubset> pair{space.sample(rng)};
    pair.push_back(detail::draw_partner(space, pair[0], rng));
    return pair;
  };
  auto ratio = [&](const std::vector<FiniteSubset>& w) -> std::optional<double> {
    const double den = hausdorff_dist(w[0], w[1], spec);
    if (!(den >= cfg.min_separation) || den == 0.0) return std::nullopt;
    return hausdorff_dist(retraction_3_to_2(w[0], spec), retraction_3_to_2(w[1], spec), spec) / den;
  };
  detail::RetractionStats stats;
  stats.spec = spec;
  stats.hull_tol = hull_tol;
  RetractionReport report;
  report.lipschitz = detail::run_estimator(space, cfg, claimed_bound, tolerance, stats, draw, ratio);
  report.max_forward_ratio = stats.forward;
  report.max_backward_ratio = stats.backward;
  report.max_step_excess = stats.excess;
  report.images_agree = stats.agree;
  report.hull_failures = stats.hull_failures;
  report.hull_tol = hull_tol;
  return report;
}

/// One row of the probe of X = R \ (-1, 1).
struct GapRow {
  double x;
  double fx;
  double displacement;
};

/// Interchange candidate on X = R \ (-1, 1) with f(1) = -1 and f(-1) = 1:
/// tau(x, 1, -1) projected onto the component of X that holds the image of
/// the component's base point. Continuity forces exactly this component
/// choice, so f(x) <= -1 for every x >= 1.
inline double gap_candidate(double x) {
  const double t = group_comixer_1d(x, 1.0, -1.0);
  if (x >= 1.0) return std::min(t, -1.0);
  if (x <= -1.0) return std::max(t, 1.0);
  throw domain_error("gap_candidate: x must lie outside (-1, 1)");
}

/// Tabulates gap_candidate on the grid 1, 1 + step, ... <= x_max.
inline std::vector<GapRow> gap_probe(double x_max, double step) {
  if (!(step > 0.0)) throw domain_error("gap_probe: step must be positive");
  if (!(x_max >= 1.0)) throw domain_error("gap_probe: x_max must be at least 1");
  std::vector<GapRow> rows;
  for (std::uint64_t k = 0;; ++k) {
    const double x = 1.0 + static_cast<double>(k) * step;
    if (x > x_max) break;
    const double fx = gap_candidate(x);
    rows.push_back({x, fx, std::abs(x - fx)});
  }
  return rows;
}

}  // namespace mlab
