#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

#include "metric_lab/vector.hpp"

namespace mlab {

/// Where and how many points the Lipschitz estimators draw.
///
/// Base points are uniform in [-box_radius, box_radius]^dim; argument pairs
/// closer than min_separation are redrawn so no ratio has a zero denominator.
struct SamplerConfig {
  std::uint64_t seed = 42;
  std::uint64_t count = 10000;
  std::size_t dim = 2;
  double box_radius = 1.0;
  double min_separation = 1e-6;

  /// Config with the default separation 1e-6 * box_radius.
  static SamplerConfig make(std::uint64_t seed, std::uint64_t count, std::size_t dim,
                            double box_radius = 1.0) {
    return {seed, count, dim, box_radius, 1e-6 * box_radius};
  }

  void validate() const {
    if (count == 0) throw domain_error("SamplerConfig: count must be positive");
    if (dim == 0) throw domain_error("SamplerConfig: dim must be positive");
    if (!(box_radius > 0.0) || !std::isfinite(box_radius)) {
      throw domain_error("SamplerConfig: box_radius must be positive");
    }
    if (!(min_separation >= 0.0)) throw domain_error("SamplerConfig: min_separation must be >= 0");
    if (min_separation >= 2.0 * box_radius) {
      throw domain_error("SamplerConfig: degenerate sampler, min_separation >= box diameter");
    }
  }
};

/// Reproducible random stream: one mt19937_64 per (seed, stream) pair.
/// Both std::seed_seq and mt19937_64 are fully specified by the standard, and
/// floats are formed from raw bits, so streams match across platforms.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  bool bernoulli(double p) { return uniform() < p; }
  std::size_t below(std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
  }

  Vector in_box(std::size_t dim, double radius) {
    std::vector<double> c(dim);
    for (double& x : c) x = uniform(-radius, radius);
    return Vector(std::move(c));
  }

  /// Random point at a log-uniform distance in [r_min, r_max] from `center`
  /// along a random box direction, clamped to the box.
  Vector near(const Vector& center, double r_min, double r_max, double radius) {
    if (!(r_min > 0.0)) r_min = 1e-9 * r_max;
    const double r = r_min * std::pow(r_max / r_min, uniform());
    Vector out = center;
    double scale = 0.0;
    std::vector<double> dir(center.dim());
    for (double& d : dir) {
      d = uniform(-1.0, 1.0);
      scale = std::max(scale, std::abs(d));
    }
    if (scale == 0.0) dir[0] = scale = 1.0;
    for (std::size_t i = 0; i < dir.size(); ++i) {
      out[i] = std::clamp(center[i] + r * dir[i] / scale, -radius, radius);
    }
    return out;
  }

 private:
  std::mt19937_64 engine_;
};

/// Runs fn(chunk) for chunk in [0, chunks) on a pool of worker threads.
/// Callers store per-chunk results by index and merge them in order, which
/// keeps results independent of the worker count.
template <class Fn>
void for_each_chunk(std::size_t chunks, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(chunks, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t k = 0; k < chunks; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < chunks; k = next++) {
        try {
          fn(k);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace mlab
