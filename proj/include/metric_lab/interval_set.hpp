#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <compare>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "metric_lab/errors.hpp"
#include "metric_lab/ternary.hpp"

namespace mlab {

struct Interval {
  double lo;
  double hi;
  friend bool operator==(const Interval&, const Interval&) = default;
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

/// A finite union of subintervals of [0, 1] in canonical form: sorted,
/// pairwise separated (hi_i < lo_{i+1}), no zero-length pieces.
///
/// Endpoint open/closed distinctions are dropped, so equality is equality
/// up to nullsets and is decided by comparing interval lists.
class IntervalSet {
 public:
  IntervalSet() = default;

  /// Sorts, merges overlapping or touching pieces and drops degenerate ones.
  static IntervalSet canonicalize(std::vector<Interval> raw) {
    for (const auto& iv : raw) {
      if (!(iv.lo >= 0.0 && iv.hi <= 1.0)) {
        throw domain_error("IntervalSet: interval outside [0, 1]");
      }
      if (!(iv.lo <= iv.hi)) throw domain_error("IntervalSet: interval with lo > hi");
    }
    std::sort(raw.begin(), raw.end());
    IntervalSet out;
    for (const auto& iv : raw) {
      if (iv.lo == iv.hi) continue;
      if (!out.pieces_.empty() && iv.lo <= out.pieces_.back().hi) {
        out.pieces_.back().hi = std::max(out.pieces_.back().hi, iv.hi);
      } else {
        out.pieces_.push_back(iv);
      }
    }
    return out;
  }

  static IntervalSet full() { return canonicalize({{0.0, 1.0}}); }

  const std::vector<Interval>& intervals() const noexcept { return pieces_; }
  bool empty() const noexcept { return pieces_.empty(); }

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;
  // Lexicographic on the interval list; a proper prefix orders first.
  friend auto operator<=>(const IntervalSet& lhs, const IntervalSet& rhs) {
    return lhs.pieces_ <=> rhs.pieces_;
  }

 private:
  std::vector<Interval> pieces_;
};

namespace detail {

// Sweeps the elementary cells cut out by all endpoints of `sets` (and 0, 1)
// and keeps the cells whose membership mask satisfies `keep`. Only endpoint
// values are copied, never computed, so the result is exact.
template <std::size_t N, class Keep>
IntervalSet sweep(const std::array<const IntervalSet*, N>& sets, Keep keep) {
  std::vector<double> cuts{0.0, 1.0};
  for (const IntervalSet* s : sets) {
    for (const auto& iv : s->intervals()) {
      cuts.push_back(iv.lo);
      cuts.push_back(iv.hi);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::array<std::size_t, N> cursor{};
  std::vector<Interval> kept;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k];
    const double hi = cuts[k + 1];
    unsigned mask = 0;
    for (std::size_t i = 0; i < N; ++i) {
      const auto& pieces = sets[i]->intervals();
      while (cursor[i] < pieces.size() && pieces[cursor[i]].hi <= lo) ++cursor[i];
      if (cursor[i] < pieces.size() && pieces[cursor[i]].lo <= lo) mask |= 1u << i;
    }
    if (!keep(mask)) continue;
    if (!kept.empty() && kept.back().hi == lo) {
      kept.back().hi = hi;
    } else {
      kept.push_back({lo, hi});
    }
  }
  return IntervalSet::canonicalize(std::move(kept));
}

}  // namespace detail

inline IntervalSet set_union(const IntervalSet& a, const IntervalSet& b) {
  return detail::sweep<2>({&a, &b}, [](unsigned m) { return m != 0; });
}
inline IntervalSet set_intersection(const IntervalSet& a, const IntervalSet& b) {
  return detail::sweep<2>({&a, &b}, [](unsigned m) { return m == 3; });
}
inline IntervalSet set_difference(const IntervalSet& a, const IntervalSet& b) {
  return detail::sweep<2>({&a, &b}, [](unsigned m) { return m == 1; });
}
inline IntervalSet sym_diff(const IntervalSet& a, const IntervalSet& b) {
  return detail::sweep<2>({&a, &b}, [](unsigned m) { return m == 1 || m == 2; });
}
inline IntervalSet complement(const IntervalSet& a) {
  return detail::sweep<1>({&a}, [](unsigned m) { return m == 0; });
}

/// (A n B) u (A n C) u (B n C): points covered by at least two arguments.
inline IntervalSet set_mixer(const IntervalSet& a, const IntervalSet& b, const IntervalSet& c) {
  return detail::sweep<3>({&a, &b, &c}, [](unsigned m) { return std::popcount(m) >= 2; });
}

/// A ^ B ^ C: points covered an odd number of times.
inline IntervalSet set_comixer(const IntervalSet& a, const IntervalSet& b, const IntervalSet& c) {
  return detail::sweep<3>({&a, &b, &c}, [](unsigned m) { return std::popcount(m) % 2 == 1; });
}

/// Wide enough to hold any sum of doubles from [0, 1] exactly: the finest
/// spacing is 2^-1074 and the sums stay far below 2^64.
using ExactReal = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<1152, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;

/// Lebesgue measure as an exact value.
inline ExactReal exact_measure(const IntervalSet& a) {
  ExactReal total = 0;
  for (const auto& iv : a.intervals()) {
    total += ExactReal(iv.hi);
    total -= ExactReal(iv.lo);
  }
  return total;
}

/// Lebesgue measure, correctly rounded. Rounding is monotone, so
/// A subset of B implies measure(A) <= measure(B) exactly.
inline double measure(const IntervalSet& a) { return exact_measure(a).convert_to<double>(); }

/// rho(A, B) = measure(A ^ B).
inline double rho(const IntervalSet& a, const IntervalSet& b) { return measure(sym_diff(a, b)); }

/// A point of the quotient of the measure algebra by A ~ complement(A).
///
/// The representative has measure below 1/2; at exactly 1/2 the
/// lexicographically smaller of A and its complement is kept.
class QuotientClass {
 public:
  static QuotientClass of(const IntervalSet& a) {
    static const ExactReal half = ExactReal(0.5);
    const ExactReal m = exact_measure(a);
    if (m < half) return QuotientClass(a);
    IntervalSet c = complement(a);
    if (m > half) return QuotientClass(std::move(c));
    return QuotientClass(std::min(a, c));
  }

  const IntervalSet& rep() const noexcept { return rep_; }

  friend bool operator==(const QuotientClass&, const QuotientClass&) = default;

 private:
  explicit QuotientClass(IntervalSet rep) : rep_(std::move(rep)) {}
  IntervalSet rep_;
};

inline QuotientClass quotient_class(const IntervalSet& a) { return QuotientClass::of(a); }

/// min(rho(A, B), rho(A, B^c)) on representatives.
inline double quotient_dist(const QuotientClass& x, const QuotientClass& y) {
  const IntervalSet d = sym_diff(x.rep(), y.rep());
  return std::min(measure(d), measure(complement(d)));
}

/// [A ^ B ^ C]; complementing any argument complements the output, so the
/// class does not depend on the representatives.
inline QuotientClass quotient_comixer(const QuotientClass& x, const QuotientClass& y,
                                      const QuotientClass& z) {
  return QuotientClass::of(set_comixer(x.rep(), y.rep(), z.rep()));
}

/// gamma(t) = [0, t], a unit-speed geodesic from the empty set to [0, 1].
inline IntervalSet geodesic_point(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw domain_error("geodesic_point: t must lie in [0, 1]");
  return IntervalSet::canonicalize({{0.0, t}});
}

struct Intertwining {
  double lhs;  // measure of gamma(a) ^ gamma(b) ^ gamma(c)
  double rhs;  // a + b + c - 2 med(a, b, c)
};

/// Both sides of measure(gamma(a) ^ gamma(b) ^ gamma(c)) = a + b + c - 2 med(a, b, c).
inline Intertwining intertwine_check(double a, double b, double c) {
  const IntervalSet lhs_set = set_comixer(geodesic_point(a), geodesic_point(b), geodesic_point(c));
  return {measure(lhs_set), group_comixer_1d(a, b, c)};
}

}  // namespace mlab
