#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "metric_lab/hull.hpp"
#include "metric_lab/interval_set.hpp"
#include "metric_lab/io.hpp"
#include "metric_lab/lipschitz.hpp"
#include "metric_lab/subset_space.hpp"
#include "metric_lab/ternary.hpp"

namespace mlab {

/// Invalid sweep configuration (maps to exit code 2).
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation names a sweep can certify. The first four are ternary
/// operations on R^dim; the rest are dimension-free.
inline const std::vector<std::string>& known_sweep_ops() {
  static const std::vector<std::string> ops{"incenter", "nagel",    "median",   "group1d",
                                            "retraction", "setmix", "setcomix", "quotient"};
  return ops;
}

struct SweepConfig {
  std::vector<std::size_t> dims{1, 2, 3};
  std::vector<NormSpec> norms{NormSpec::lp(1.0), NormSpec::lp(2.0), NormSpec::max()};
  std::vector<std::string> ops = known_sweep_ops();
  std::uint64_t samples = 10000;
  std::uint64_t seed = 42;
  double box_radius = 1.0;
  std::string output_path = "certify_report.json";
  std::string format = "json";
  /// Overrides the per-argument bound of an op (testing hook; e.g. nagel: 0.5).
  std::map<std::string, double> claimed_bounds;

  void validate() const {
    if (dims.empty()) throw config_error("config: dims must be nonempty");
    if (norms.empty()) throw config_error("config: norms must be nonempty");
    if (ops.empty()) throw config_error("config: ops must be nonempty");
    if (samples == 0) throw config_error("config: samples must be positive");
    if (!(box_radius > 0.0)) throw config_error("config: box_radius must be positive");
    if (format != "json" && format != "csv") throw config_error("config: format must be json or csv");
    for (std::size_t d : dims) {
      if (d == 0) throw config_error("config: dims must be positive");
    }
    for (const auto& op : ops) {
      const auto& known = known_sweep_ops();
      if (std::find(known.begin(), known.end(), op) == known.end()) {
        throw config_error("config: unknown op '" + op + "'");
      }
    }
  }
};

/// Reads a SweepConfig from JSON; absent keys keep their defaults.
inline SweepConfig sweep_config_from_json(const nlohmann::json& j) {
  SweepConfig cfg;
  try {
    if (!j.is_object()) throw config_error("config: expected a JSON object");
    if (j.contains("dims")) cfg.dims = j.at("dims").get<std::vector<std::size_t>>();
    if (j.contains("norms")) {
      cfg.norms.clear();
      for (const auto& n : j.at("norms")) cfg.norms.push_back(parse_norm_spec(n.get<std::string>()));
    }
    if (j.contains("ops")) cfg.ops = j.at("ops").get<std::vector<std::string>>();
    if (j.contains("samples")) cfg.samples = j.at("samples").get<std::uint64_t>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("box_radius")) cfg.box_radius = j.at("box_radius").get<double>();
    if (j.contains("output_path")) cfg.output_path = j.at("output_path").get<std::string>();
    if (j.contains("format")) cfg.format = j.at("format").get<std::string>();
    if (j.contains("claimed_bounds")) {
      cfg.claimed_bounds = j.at("claimed_bounds").get<std::map<std::string, double>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config: ") + e.what());
  } catch (const parse_error& e) {
    throw config_error(std::string("config: ") + e.what());
  }
  return cfg;
}

inline nlohmann::ordered_json sweep_config_to_json(const SweepConfig& cfg) {
  nlohmann::ordered_json j;
  j["dims"] = cfg.dims;
  auto& norms = j["norms"] = nlohmann::ordered_json::array();
  for (const auto& n : cfg.norms) norms.push_back(format_norm_spec(n));
  j["ops"] = cfg.ops;
  j["samples"] = cfg.samples;
  j["seed"] = cfg.seed;
  j["box_radius"] = cfg.box_radius;
  j["output_path"] = cfg.output_path;
  j["format"] = cfg.format;
  j["claimed_bounds"] = cfg.claimed_bounds;
  return j;
}

/// METRIC_LAB_SEED, when set, replaces the configured seed.
inline void apply_env_overrides(SweepConfig& cfg) {
  if (const char* s = std::getenv("METRIC_LAB_SEED")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(s, &used);
      if (used != std::string(s).size()) throw std::invalid_argument(s);
      cfg.seed = v;
    } catch (const std::exception&) {
      throw config_error(std::string("METRIC_LAB_SEED is not an unsigned integer: ") + s);
    }
  }
}

/// One line of a certification report.
struct CheckRecord {
  std::string check;
  std::string op;
  int arg_index = 0;  // 0 when the check has no argument position
  std::string norm;   // empty for norm-free checks
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  double estimate = 0.0;
  double claimed_bound = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string claim;
  std::vector<std::string> witness;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
};

struct CertifyOutcome {
  std::vector<CheckRecord> checks;
  bool all_pass = true;
};

namespace detail {

// Stream ids for the identity and hull checks, disjoint from the chunk
// streams (0, 1, ...) used by the estimators.
inline constexpr std::uint64_t kIdentityStream = 1ull << 40;
inline constexpr std::uint64_t kHullStream = 2ull << 40;
inline constexpr std::uint64_t kDerivativeStream = 3ull << 40;
inline constexpr std::uint64_t kRetractionStream = 4ull << 40;

template <class Point, class Format>
std::vector<std::string> format_all(const std::vector<Point>& pts, Format fmt) {
  std::vector<std::string> out;
  for (const auto& p : pts) out.push_back(fmt(p));
  return out;
}

inline std::string format_class(const QuotientClass& x) { return format_interval_set(x.rep()); }

template <class Point, class Format>
CheckRecord lipschitz_record(std::string check, std::string op, int arg, std::string norm,
                             std::size_t dim, const SamplerConfig& sc,
                             const LipschitzReport<Point>& r, std::string claim, Format fmt) {
  CheckRecord rec;
  rec.check = std::move(check);
  rec.op = std::move(op);
  rec.arg_index = arg;
  rec.norm = std::move(norm);
  rec.dim = dim;
  rec.seed = sc.seed;
  rec.samples = r.samples_used;
  rec.estimate = r.estimate;
  rec.claimed_bound = r.claimed_bound;
  rec.tolerance = r.tolerance;
  rec.pass = r.pass;
  rec.claim = std::move(claim);
  rec.witness = format_all(r.witness, fmt);
  return rec;
}

inline std::vector<std::pair<Vector, Vector>> random_pairs(const SamplerConfig& sc, std::uint64_t stream) {
  Rng rng(sc.seed, stream);
  std::vector<std::pair<Vector, Vector>> pairs;
  pairs.reserve(sc.count);
  for (std::uint64_t i = 0; i < sc.count; ++i) {
    Vector a = rng.in_box(sc.dim, sc.box_radius);
    Vector b = rng.in_box(sc.dim, sc.box_radius);
    pairs.emplace_back(std::move(a), std::move(b));
  }
  return pairs;
}

// Random point whose coordinates, and those of x - a, stay 1e-3 away from
// zero and whose norm distance to 0 and a exceeds 1e-3.
inline Vector smooth_point(Rng& rng, const Vector& a, const NormSpec& spec, double radius) {
  for (;;) {
    Vector x = rng.in_box(a.dim(), radius);
    bool ok = norm(x, spec) > 1e-3 && dist(x, a, spec) > 1e-3;
    for (std::size_t i = 0; ok && i < x.dim(); ++i) {
      ok = std::abs(x[i]) > 1e-3 && std::abs(x[i] - a[i]) > 1e-3;
    }
    if (ok) return x;
  }
}

inline Vector unit_vector(Rng& rng, std::size_t dim, const NormSpec& spec) {
  for (;;) {
    Vector v = rng.in_box(dim, 1.0);
    const double n = norm(v, spec);
    if (n > 1e-3) return v / n;
  }
}

class SweepRunner {
 public:
  explicit SweepRunner(const SweepConfig& cfg) : cfg_(cfg) {}

  CertifyOutcome run() {
    cfg_.validate();
    for (const auto& op : cfg_.ops) {
      if (op == "setmix" || op == "setcomix" || op == "quotient") {
        run_measure_op(op);
        continue;
      }
      for (std::size_t dim : cfg_.dims) {
        for (const auto& spec : cfg_.norms) {
          if (spec.weighted() && spec.weights().size() != dim) continue;
          if (op == "retraction") {
            run_retraction(dim, spec);
          } else {
            run_vector_op(*parse_kind(op), dim, spec);
          }
        }
      }
    }
    for (const auto& c : out_.checks) out_.all_pass = out_.all_pass && c.pass;
    return std::move(out_);
  }

 private:
  SamplerConfig sampler(std::size_t dim) const {
    return SamplerConfig::make(cfg_.seed, cfg_.samples, dim, cfg_.box_radius);
  }

  double per_arg_bound(const std::string& op, double fallback) const {
    auto it = cfg_.claimed_bounds.find(op);
    return it == cfg_.claimed_bounds.end() ? fallback : it->second;
  }

  void add(CheckRecord rec) { out_.checks.push_back(std::move(rec)); }

  CheckRecord base(std::string check, std::string op, std::string norm, std::size_t dim,
                   std::uint64_t samples) const {
    CheckRecord rec;
    rec.check = std::move(check);
    rec.op = std::move(op);
    rec.norm = std::move(norm);
    rec.dim = dim;
    rec.seed = cfg_.seed;
    rec.samples = samples;
    return rec;
  }

  void run_vector_op(TernaryKind kind, std::size_t dim, const NormSpec& spec) {
    const TernaryOp op(kind, spec);
    const std::string name(kind_name(kind));
    const std::string norm = format_norm_spec(spec);
    const SamplerConfig sc = sampler(dim);
    auto vec = [](const Vector& v) { return format_vector(v); };

    {
      const auto pairs = random_pairs(sc, kIdentityStream);
      const bool mixer = is_mixer(kind);
      const IdentityCheck chk = mixer ? check_absorption(op, pairs) : check_anti_absorption(op, pairs);
      CheckRecord rec = base(mixer ? "absorption" : "anti_absorption", name, norm, dim, sc.count);
      rec.estimate = chk.worst_violation;
      rec.claimed_bound = kIdentityTolerance;
      rec.pass = chk.pass;
      rec.claim = mixer ? "op(a,a,b) = op(a,b,a) = op(b,a,a) = a"
                        : "op(a,a,b) = op(a,b,a) = op(b,a,a) = b";
      if (chk.witness) rec.witness = {vec(chk.witness->first), vec(chk.witness->second)};
      add(std::move(rec));
    }

    for (int arg = 1; arg <= 3; ++arg) {
      const auto r = estimate_per_arg_lipschitz(op, arg, sc, per_arg_bound(name, 1.0));
      add(lipschitz_record("per_arg_lipschitz", name, arg, norm, dim, sc, r,
                           name + " is 1-Lipschitz in each argument separately", vec));
    }

    if (kind != TernaryKind::group_comixer_1d) {
      const auto r = estimate_joint_lipschitz(op, sc);
      const bool nonexpanding = r.claimed_bound == 1.0;
      add(lipschitz_record("joint_lipschitz", name, 0, norm, dim, sc, r,
                           nonexpanding ? "coordinate-wise median is jointly nonexpanding in the max norm"
                                        : "three single-argument steps give joint constant 3",
                           vec));
    }

    if (kind == TernaryKind::incenter_mixer || kind == TernaryKind::nagel_comixer) {
      hull_check(op, name, norm, sc);
      derivative_check(kind, name, spec, norm, sc);
    }
    if (kind == TernaryKind::nagel_comixer) interchange_check(op, name, norm, sc);
  }

  void hull_check(const TernaryOp& op, const std::string& name, const std::string& norm,
                  const SamplerConfig& sc) {
    Rng rng(sc.seed, kHullStream);
    CheckRecord rec = base("hull", name, norm, sc.dim, sc.count);
    std::uint64_t failures = 0;
    for (std::uint64_t i = 0; i < sc.count; ++i) {
      const Vector a = rng.in_box(sc.dim, sc.box_radius);
      const Vector b = rng.in_box(sc.dim, sc.box_radius);
      const Vector c = rng.in_box(sc.dim, sc.box_radius);
      const double d = hull_distance(op(a, b, c), a, b, c);
      if (d > 1e-8) ++failures;
      if (rec.witness.empty() || d > rec.estimate) {
        rec.estimate = d;
        rec.witness = {format_vector(a), format_vector(b), format_vector(c)};
      }
    }
    rec.claimed_bound = 1e-8;
    rec.pass = failures == 0;
    rec.claim = "output lies in the convex hull of {a, b, c}";
    rec.extra["failures"] = failures;
    add(std::move(rec));
  }

  void derivative_check(TernaryKind kind, const std::string& name, const NormSpec& spec,
                        const std::string& norm, const SamplerConfig& sc) {
    constexpr double h = 1e-5;
    const std::uint64_t n = std::max<std::uint64_t>(100, sc.count / 10);
    const Section section = kind == TernaryKind::incenter_mixer ? Section::incenter : Section::nagel;
    Rng rng(sc.seed, kDerivativeStream);
    CheckRecord rec = base("directional_derivative", name, norm, sc.dim, n);
    for (std::uint64_t i = 0; i < n; ++i) {
      const Vector a = unit_vector(rng, sc.dim, spec);
      const Vector u = unit_vector(rng, sc.dim, spec);
      const Vector x = smooth_point(rng, a, spec, 2.0);
      const double v = derivative_bound_check(section, a, x, u, spec, h);
      if (rec.witness.empty() || v > rec.estimate) {
        rec.estimate = v;
        rec.witness = {format_vector(a), format_vector(x), format_vector(u)};
      }
    }
    rec.claimed_bound = 1.0;
    rec.tolerance = 10 * h + 1e-8;
    rec.pass = rec.estimate <= rec.claimed_bound + rec.tolerance;
    rec.claim = "||D_u Phi(x)|| <= 1 for Phi(x) = op(0, a, x), ||a|| = ||u|| = 1";
    add(std::move(rec));
  }

  void interchange_check(const TernaryOp& op, const std::string& name, const std::string& norm,
                         const SamplerConfig& sc) {
    const auto pairs = random_pairs(sc, kIdentityStream + 1);
    CheckRecord rec = base("interchange", name, norm, sc.dim, sc.count);
    for (const auto& [a, b] : pairs) {
      const auto f = interchange_map(op, a, b);
      const double v = std::max(dist(f(a), b, op.spec()), dist(f(b), a, op.spec()));
      if (rec.witness.empty() || v > rec.estimate) {
        rec.estimate = v;
        rec.witness = {format_vector(a), format_vector(b)};
      }
    }
    rec.claimed_bound = kIdentityTolerance;
    rec.pass = rec.estimate <= rec.claimed_bound;
    rec.claim = "f(x) = op(x, a, b) swaps a and b";
    add(std::move(rec));
  }

  void run_retraction(std::size_t dim, const NormSpec& spec) {
    const std::string norm = format_norm_spec(spec);
    const SamplerConfig sc = sampler(dim);
    const RetractionReport r = estimate_retraction_lipschitz(sc, spec, per_arg_bound("retraction", 9.0));
    CheckRecord rec = lipschitz_record("retraction_lipschitz", "retraction", 0, norm, dim, sc, r.lipschitz,
                                       "{incenter, nagel} is a 9-Lipschitz retraction X(3) -> X(2)",
                                       [](const FiniteSubset& s) { return format_subset(s); });
    add(std::move(rec));

    CheckRecord fwd = base("retraction_chain_forward", "retraction", norm, dim, sc.count);
    fwd.estimate = r.max_forward_ratio;
    fwd.claimed_bound = 3.0;
    fwd.tolerance = kRatioTolerance;
    fwd.pass = r.images_agree && fwd.estimate <= 3.0 + kRatioTolerance &&
               r.max_step_excess <= kRatioTolerance;
    fwd.claim = "dH(rho(A), rho(f(A))) <= 3 delta";
    fwd.extra["images_agree"] = r.images_agree;
    fwd.extra["max_step_excess"] = r.max_step_excess;
    add(std::move(fwd));

    CheckRecord bwd = base("retraction_chain_backward", "retraction", norm, dim, sc.count);
    bwd.estimate = r.max_backward_ratio;
    bwd.claimed_bound = 6.0;
    bwd.tolerance = kRatioTolerance;
    bwd.pass = r.images_agree && bwd.estimate <= 6.0 + kRatioTolerance;
    bwd.claim = "dH(rho(B), rho(h(B))) <= 6 delta";
    add(std::move(bwd));

    CheckRecord hull = base("retraction_hull", "retraction", norm, dim, 2 * sc.count);
    hull.estimate = static_cast<double>(r.hull_failures);
    hull.claimed_bound = 0.0;
    hull.pass = r.hull_failures == 0;
    hull.claim = "rho(E) lies in the convex hull of E";
    add(std::move(hull));

    // Retraction property on sets with one or two points.
    Rng rng(sc.seed, kRetractionStream);
    CheckRecord fix = base("retraction_fixes_x2", "retraction", norm, dim, sc.count);
    std::uint64_t moved = 0;
    for (std::uint64_t i = 0; i < sc.count; ++i) {
      std::vector<Vector> pts{rng.in_box(dim, sc.box_radius)};
      if (rng.bernoulli(0.5)) pts.push_back(rng.in_box(dim, sc.box_radius));
      const FiniteSubset e(pts, 3);
      if (!(retraction_3_to_2(e, spec) == FiniteSubset(pts, 2))) {
        ++moved;
        if (fix.witness.empty()) fix.witness = {format_subset(e)};
      }
    }
    fix.estimate = static_cast<double>(moved);
    fix.pass = moved == 0;
    fix.claim = "rho(E) = E for |E| <= 2";
    add(std::move(fix));
  }

  void run_measure_op(const std::string& name) {
    const SamplerConfig sc{cfg_.seed, cfg_.samples, 1, 1.0, 1e-9};
    const IntervalSetSpace sets{6, sc.min_separation};
    auto set_fmt = [](const IntervalSet& s) { return format_interval_set(s); };
    auto class_fmt = [](const QuotientClass& x) { return format_class(x); };
    const char* per_arg_claim = "1-Lipschitz in each argument";

    if (name == "setmix" || name == "setcomix") {
      const bool mixer = name == "setmix";
      auto op = [mixer](const IntervalSet& a, const IntervalSet& b, const IntervalSet& c) {
        return mixer ? set_mixer(a, b, c) : set_comixer(a, b, c);
      };
      Rng rng(sc.seed, kIdentityStream);
      CheckRecord rec = base(mixer ? "absorption" : "anti_absorption", name, "", 0, sc.count);
      for (std::uint64_t i = 0; i < sc.count; ++i) {
        const IntervalSet a = sets.sample(rng);
        const IntervalSet b = sets.sample(rng);
        const IntervalSet& target = mixer ? a : b;
        const double v = std::max({rho(op(a, a, b), target), rho(op(a, b, a), target), rho(op(b, a, a), target)});
        if (rec.witness.empty() || v > rec.estimate) {
          rec.estimate = v;
          rec.witness = {set_fmt(a), set_fmt(b)};
        }
      }
      rec.pass = rec.estimate == 0.0;
      rec.claim = mixer ? "majority set absorbs repeated arguments exactly"
                        : "parity set returns the unrepeated argument exactly";
      add(std::move(rec));
      for (int arg = 1; arg <= 3; ++arg) {
        const auto r = estimate_per_arg_lipschitz(sets, op, arg, sc, per_arg_bound(name, 1.0), 0.0);
        add(lipschitz_record("per_arg_lipschitz", name, arg, "rho", 0, sc, r, per_arg_claim, set_fmt));
      }
      if (!mixer) {
        Rng irng(sc.seed, kIdentityStream + 1);
        CheckRecord tw = base("intertwining", name, "", 0, sc.count);
        for (std::uint64_t i = 0; i < sc.count; ++i) {
          const double a = irng.uniform(), b = irng.uniform(), c = irng.uniform();
          const Intertwining r = intertwine_check(a, b, c);
          const double v = std::abs(r.lhs - r.rhs);
          if (tw.witness.empty() || v > tw.estimate) {
            tw.estimate = v;
            tw.witness = {format_double(a), format_double(b), format_double(c)};
          }
        }
        tw.claimed_bound = 1e-12;
        tw.pass = tw.estimate <= tw.claimed_bound;
        tw.claim = "measure([0,a] ^ [0,b] ^ [0,c]) = a + b + c - 2 med(a, b, c)";
        add(std::move(tw));
      }
      return;
    }

    // quotient
    const QuotientSpace space{sets};
    Rng rng(sc.seed, kIdentityStream);
    CheckRecord anti = base("anti_absorption", name, "", 0, sc.count);
    CheckRecord wd = base("well_defined", name, "", 0, sc.count);
    std::uint64_t anti_failures = 0;
    std::uint64_t wd_failures = 0;
    for (std::uint64_t i = 0; i < sc.count; ++i) {
      const IntervalSet a = sets.sample(rng), b = sets.sample(rng), c = sets.sample(rng);
      const QuotientClass x = QuotientClass::of(a), y = QuotientClass::of(b);
      if (!(quotient_comixer(x, x, y) == y && quotient_comixer(x, y, x) == y &&
            quotient_comixer(y, x, x) == y)) {
        if (anti_failures++ == 0) anti.witness = {set_fmt(a), set_fmt(b)};
      }
      const IntervalSet reference = QuotientClass::of(set_comixer(a, b, c)).rep();
      const std::array<IntervalSet, 2> as{a, complement(a)}, bs{b, complement(b)}, cs{c, complement(c)};
      for (unsigned flips = 0; flips < 8; ++flips) {
        const IntervalSet out = set_comixer(as[flips & 1], bs[(flips >> 1) & 1], cs[(flips >> 2) & 1]);
        if (!(QuotientClass::of(out).rep() == reference)) {
          if (wd_failures++ == 0) wd.witness = {set_fmt(a), set_fmt(b), set_fmt(c)};
        }
      }
    }
    anti.estimate = static_cast<double>(anti_failures);
    anti.pass = anti_failures == 0;
    anti.claim = "induced co-mixer returns the unrepeated class";
    wd.estimate = static_cast<double>(wd_failures);
    wd.pass = wd_failures == 0;
    wd.claim = "[A ^ B ^ C] is unchanged by complementing any argument";
    add(std::move(anti));
    add(std::move(wd));

    auto qop = [](const QuotientClass& x, const QuotientClass& y, const QuotientClass& z) {
      return quotient_comixer(x, y, z);
    };
    for (int arg = 1; arg <= 3; ++arg) {
      const auto r = estimate_per_arg_lipschitz(space, qop, arg, sc, per_arg_bound(name, 1.0), 0.0);
      add(lipschitz_record("per_arg_lipschitz", name, arg, "quotient_rho", 0, sc, r, per_arg_claim,
                           class_fmt));
    }

    CheckRecord loop = base("geodesic_loop", name, "", 0, sc.count);
    Rng grng(sc.seed, kIdentityStream + 2);
    for (std::uint64_t i = 0; i < sc.count; ++i) {
      const double s = grng.uniform(), t = grng.uniform();
      const double v = std::abs(rho(geodesic_point(s), geodesic_point(t)) - std::abs(s - t));
      if (loop.witness.empty() || v > loop.estimate) {
        loop.estimate = v;
        loop.witness = {format_double(s), format_double(t)};
      }
    }
    const double closes = quotient_dist(QuotientClass::of(geodesic_point(0.0)),
                                        QuotientClass::of(geodesic_point(1.0)));
    loop.claimed_bound = 1e-15;
    loop.pass = loop.estimate <= loop.claimed_bound && closes == 0.0;
    loop.claim = "rho(gamma(s), gamma(t)) = |s - t| and [gamma(0)] = [gamma(1)]";
    loop.extra["endpoint_distance"] = closes;
    add(std::move(loop));
  }

  SweepConfig cfg_;
  CertifyOutcome out_;
};

}  // namespace detail

/// Runs every check of the sweep grid.
inline CertifyOutcome run_certify(const SweepConfig& cfg) { return detail::SweepRunner(cfg).run(); }

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// JSON report. Everything except "generated_at" is a function of the config.
inline nlohmann::ordered_json certify_report_json(const SweepConfig& cfg, const CertifyOutcome& out,
                                                  const std::string& timestamp = utc_timestamp()) {
  nlohmann::ordered_json j;
  j["tool"] = "metric_lab certify";
  j["generated_at"] = timestamp;
  j["config"] = sweep_config_to_json(cfg);
  auto& checks = j["checks"] = nlohmann::ordered_json::array();
  std::size_t failed = 0;
  for (const auto& c : out.checks) {
    nlohmann::ordered_json e;
    e["check"] = c.check;
    e["op"] = c.op;
    e["arg_index"] = c.arg_index;
    e["norm"] = c.norm;
    e["dim"] = c.dim;
    e["seed"] = c.seed;
    e["samples"] = c.samples;
    e["estimate"] = c.estimate;
    e["claimed_bound"] = c.claimed_bound;
    e["tolerance"] = c.tolerance;
    e["pass"] = c.pass;
    e["claim"] = c.claim;
    e["witness"] = c.witness;
    if (!c.extra.empty()) e["details"] = c.extra;
    checks.push_back(std::move(e));
    if (!c.pass) ++failed;
  }
  j["summary"] = {{"checks", out.checks.size()}, {"failed", failed}, {"pass", out.all_pass}};
  return j;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

inline std::string certify_report_csv(const CertifyOutcome& out) {
  std::string s = "check,op,arg_index,norm,dim,seed,samples,estimate,claimed_bound,tolerance,pass\n";
  for (const auto& c : out.checks) {
    s += csv_field(c.check) + ',' + csv_field(c.op) + ',' + std::to_string(c.arg_index) + ',' +
         csv_field(c.norm) + ',' + std::to_string(c.dim) + ',' + std::to_string(c.seed) + ',' +
         std::to_string(c.samples) + ',' + format_double(c.estimate) + ',' +
         format_double(c.claimed_bound) + ',' + format_double(c.tolerance) + ',' +
         (c.pass ? "true" : "false") + '\n';
  }
  return s;
}

}  // namespace mlab
