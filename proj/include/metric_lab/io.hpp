#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "metric_lab/interval_set.hpp"
#include "metric_lab/subset_space.hpp"
#include "metric_lab/vector.hpp"

namespace mlab {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split(std::string_view s, std::string_view sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + sep.size();
  }
  return parts;
}

}  // namespace detail

inline double parse_double(std::string_view text) {
  text = detail::trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw parse_error("not a finite number: '" + std::string(text) + "'");
  }
  return value;
}

/// Shortest text that reads back to the same double.
inline std::string format_double(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

/// "x1,...,xd".
inline Vector parse_vector(std::string_view text) {
  std::vector<double> coords;
  for (auto part : detail::split(detail::trim(text), ",")) coords.push_back(parse_double(part));
  return Vector(std::move(coords));
}

inline std::string format_vector(const Vector& v) {
  std::string out;
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

/// "x1,...,xd;y1,...,yd;z1,...,zd".
inline std::array<Vector, 3> parse_triple(std::string_view text) {
  const auto parts = detail::split(detail::trim(text), ";");
  if (parts.size() != 3) throw parse_error("expected three ';'-separated vectors");
  std::array<Vector, 3> t{parse_vector(parts[0]), parse_vector(parts[1]), parse_vector(parts[2])};
  detail::require_same_dim(t[0].dim(), t[1].dim(), "triple");
  detail::require_same_dim(t[0].dim(), t[2].dim(), "triple");
  return t;
}

/// "p1", "p2", "p1.5", "pinf", optionally followed by ":weights=w1,w2,...".
/// A bare exponent ("2", "inf") is accepted too.
inline NormSpec parse_norm_spec(std::string_view text) {
  text = detail::trim(text);
  std::vector<double> weights;
  if (const auto colon = text.find(':'); colon != std::string_view::npos) {
    auto rest = detail::trim(text.substr(colon + 1));
    constexpr std::string_view key = "weights=";
    if (rest.substr(0, key.size()) != key) throw parse_error("norm spec: expected 'weights=' after ':'");
    for (auto w : detail::split(rest.substr(key.size()), ",")) weights.push_back(parse_double(w));
    text = detail::trim(text.substr(0, colon));
  }
  if (!text.empty() && text.front() == 'p') text.remove_prefix(1);
  try {
    if (text == "inf" || text == "Inf" || text == "infinity") return NormSpec::max(std::move(weights));
    return NormSpec::lp(parse_double(text), std::move(weights));
  } catch (const domain_error& e) {
    throw parse_error(std::string("norm spec: ") + e.what());
  }
}

inline std::string format_norm_spec(const NormSpec& spec) {
  std::string out = spec.is_max() ? "pinf" : "p" + format_double(spec.exponent());
  if (spec.weighted()) {
    out += ":weights=";
    for (std::size_t i = 0; i < spec.weights().size(); ++i) {
      if (i) out += ',';
      out += format_double(spec.weights()[i]);
    }
  }
  return out;
}

/// "0.0-0.25,0.75-1.0"; the empty set is "empty".
inline IntervalSet parse_interval_set(std::string_view text) {
  text = detail::trim(text);
  if (text == "empty" || text.empty()) return {};
  std::vector<Interval> raw;
  for (auto piece : detail::split(text, ",")) {
    piece = detail::trim(piece);
    // The separating '-' is the first one that is not an exponent sign.
    std::size_t dash = std::string_view::npos;
    for (std::size_t i = 1; i < piece.size(); ++i) {
      if (piece[i] == '-' && piece[i - 1] != 'e' && piece[i - 1] != 'E') {
        dash = i;
        break;
      }
    }
    if (dash == std::string_view::npos) throw parse_error("interval '" + std::string(piece) + "' has no '-'");
    raw.push_back({parse_double(piece.substr(0, dash)), parse_double(piece.substr(dash + 1))});
  }
  try {
    return IntervalSet::canonicalize(std::move(raw));
  } catch (const domain_error& e) {
    throw parse_error(e.what());
  }
}

inline std::string format_interval_set(const IntervalSet& a) {
  if (a.empty()) return "empty";
  std::string out;
  for (const auto& iv : a.intervals()) {
    if (!out.empty()) out += ',';
    out += format_double(iv.lo) + "-" + format_double(iv.hi);
  }
  return out;
}

/// "x1,...,xd | y1,...,yd | z1,...,zd".
inline FiniteSubset parse_subset(std::string_view text, std::size_t capacity = 3) {
  std::vector<Vector> pts;
  for (auto part : detail::split(detail::trim(text), "|")) pts.push_back(parse_vector(part));
  try {
    return FiniteSubset(std::move(pts), capacity);
  } catch (const domain_error& e) {
    throw parse_error(e.what());
  }
}

inline std::string format_subset(const FiniteSubset& s) {
  std::string out;
  for (const auto& p : s.points()) {
    if (!out.empty()) out += " | ";
    out += format_vector(p);
  }
  return out;
}

}  // namespace mlab
