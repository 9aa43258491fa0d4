#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "metric_lab/hull.hpp"
#include "metric_lab/ternary.hpp"

using namespace mlab;

namespace {

Vector random_vector(std::mt19937_64& gen, std::size_t dim) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(dim);
  for (double& x : c) x = u(gen);
  return Vector(c);
}

std::vector<NormSpec> grid_norms() {
  return {NormSpec::lp(1), NormSpec::lp(1.5), NormSpec::lp(2), NormSpec::max()};
}

void expect_near(const Vector& x, const Vector& y, double tol) {
  ASSERT_EQ(x.dim(), y.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) EXPECT_NEAR(x[i], y[i], tol) << "coordinate " << i;
}

// Distance from p to the line through u and v in the plane.
double line_distance(const Vector& p, const Vector& u, const Vector& v) {
  const double cross = (v[0] - u[0]) * (p[1] - u[1]) - (v[1] - u[1]) * (p[0] - u[0]);
  return std::abs(cross) / std::hypot(v[0] - u[0], v[1] - u[1]);
}

// Classical Nagel point: barycentric weights (s - a, s - b, s - c), where a is
// the side length opposite vertex A and s the semiperimeter.
Vector nagel_oracle(const Vector& A, const Vector& B, const Vector& C) {
  const double a = std::hypot(B[0] - C[0], B[1] - C[1]);
  const double b = std::hypot(A[0] - C[0], A[1] - C[1]);
  const double c = std::hypot(A[0] - B[0], A[1] - B[1]);
  const double s = (a + b + c) / 2;
  return ((s - a) * A + (s - b) * B + (s - c) * C) / s;
}

std::vector<std::pair<Vector, Vector>> random_pairs(std::mt19937_64& gen, std::size_t dim, int n) {
  std::vector<std::pair<Vector, Vector>> out;
  for (int i = 0; i < n; ++i) {
    Vector a = random_vector(gen, dim);
    Vector b = random_vector(gen, dim);
    out.emplace_back(std::move(a), std::move(b));
  }
  return out;
}

}  // namespace

TEST(Incenter, RightTriangleExample) {
  const Vector a{0, 0}, b{3, 0}, c{0, 4};
  const Vector s = incenter_mixer(a, b, c, NormSpec::lp(2));
  expect_near(s, {1, 1}, 1e-15);
  // The incenter is equidistant from the three side lines.
  EXPECT_NEAR(line_distance(s, a, b), 1.0, 1e-15);
  EXPECT_NEAR(line_distance(s, b, c), 1.0, 1e-15);
  EXPECT_NEAR(line_distance(s, a, c), 1.0, 1e-15);
}

TEST(Incenter, EuclideanMatchesEquidistanceOnRandomTriangles) {
  std::mt19937_64 gen(11);
  for (int i = 0; i < 1000; ++i) {
    const Vector a = random_vector(gen, 2), b = random_vector(gen, 2), c = random_vector(gen, 2);
    const Vector s = incenter_mixer(a, b, c, NormSpec::lp(2));
    const double r = line_distance(s, a, b);
    EXPECT_NEAR(line_distance(s, b, c), r, 1e-9);
    EXPECT_NEAR(line_distance(s, a, c), r, 1e-9);
    EXPECT_TRUE(in_triple_hull(s, a, b, c, 1e-12));
  }
}

TEST(Incenter, AllEqualReturnsThePoint) {
  const Vector p{7, -2};
  EXPECT_EQ(incenter_mixer(p, p, p, NormSpec{}), p);
  EXPECT_EQ(nagel_comixer(p, p, p, NormSpec{}), p);
}

TEST(Incenter, TaxicabExample) {
  const Vector a{0, 0}, b{1, 0}, c{0, 1};
  // l1 side lengths 2, 1, 1 give (2a + b + c) / 4.
  expect_near(incenter_mixer(a, b, c, NormSpec::lp(1)), (2.0 * a + b + c) / 4.0, 1e-16);
  expect_near(incenter_mixer(a, b, c, NormSpec::lp(1)), {0.25, 0.25}, 1e-16);
  expect_near(nagel_comixer(a, b, c, NormSpec::lp(1)), {0.5, 0.5}, 1e-16);
}

TEST(Nagel, RightTriangleExample) {
  const Vector a{0, 0}, b{3, 0}, c{0, 4};
  expect_near(nagel_comixer(a, b, c, NormSpec::lp(2)), {1, 2}, 1e-15);
  expect_near(nagel_oracle(a, b, c), {1, 2}, 1e-15);
}

TEST(Nagel, EuclideanMatchesBarycentricFormula) {
  std::mt19937_64 gen(12);
  for (int i = 0; i < 1000; ++i) {
    const Vector a = random_vector(gen, 2), b = random_vector(gen, 2), c = random_vector(gen, 2);
    expect_near(nagel_comixer(a, b, c, NormSpec::lp(2)), nagel_oracle(a, b, c), 1e-12);
  }
}

TEST(Ternary, DimensionMismatchThrows) {
  EXPECT_THROW(incenter_mixer({0, 0}, {1}, {0, 1}, NormSpec{}), dimension_error);
  EXPECT_THROW(nagel_comixer({0, 0}, {1, 0}, {0}, NormSpec{}), dimension_error);
  EXPECT_THROW(median_mixer({0}, {1, 0}, {0, 1}), dimension_error);
}

TEST(Median, Examples) {
  EXPECT_EQ(median_mixer({1}, {5}, {3}), (Vector{3}));
  EXPECT_EQ(median_mixer({0, 0, 0}, {1, 1, 0}, {0, 1, 1}), (Vector{0, 1, 0}));
  EXPECT_EQ(median_mixer({2, 9}, {2, 9}, {-4, 1}), (Vector{2, 9}));
}

TEST(Median, OutputCanLeaveTheAffineSpan) {
  const Vector a{0, 0, 0}, b{1, 1, 0}, c{0, 1, 1};
  const Vector m = median_mixer(a, b, c);
  // Least squares for m - a = s (b - a) + t (c - a) via the 2x2 normal equations.
  const Vector e1 = b - a, e2 = c - a, r = m - a;
  auto dot = [](const Vector& x, const Vector& y) {
    double s = 0;
    for (std::size_t i = 0; i < x.dim(); ++i) s += x[i] * y[i];
    return s;
  };
  const double g11 = dot(e1, e1), g12 = dot(e1, e2), g22 = dot(e2, e2);
  const double det = g11 * g22 - g12 * g12;
  const double s = (g22 * dot(r, e1) - g12 * dot(r, e2)) / det;
  const double t = (g11 * dot(r, e2) - g12 * dot(r, e1)) / det;
  const Vector residual = r - s * e1 - t * e2;
  EXPECT_GT(std::sqrt(dot(residual, residual)), 0.5);
}

TEST(GroupComixer, Examples) {
  EXPECT_EQ(group_comixer_1d(1, 5, 3), 3);
  EXPECT_EQ(group_comixer_1d(2, 2, 7), 7);
  EXPECT_EQ(group_comixer_1d(0, 4, 6), 2);
  EXPECT_EQ(group_comixer({1, 0}, {5, 4}, {3, 6}), (Vector{3, 2}));
}

TEST(GroupComixer, ClosedOnLattices) {
  std::mt19937_64 gen(13);
  std::uniform_int_distribution<int> k(-50, 50);
  for (double step : {1.0, 2.0, 0.25}) {
    for (int i = 0; i < 1000; ++i) {
      const double v = group_comixer_1d(step * k(gen), step * k(gen), step * k(gen));
      EXPECT_EQ(std::fmod(v, step), 0.0) << v;
    }
  }
}

TEST(Absorption, Examples) {
  std::mt19937_64 gen(14);
  const auto pairs = random_pairs(gen, 3, 1000);
  EXPECT_TRUE(check_absorption(TernaryOp(TernaryKind::incenter_mixer, NormSpec::lp(2)), pairs).pass);
  const auto med = check_absorption(TernaryOp(TernaryKind::median_mixer, NormSpec{}), pairs);
  EXPECT_TRUE(med.pass);
  EXPECT_EQ(med.worst_violation, 0.0);
  EXPECT_EQ(med.pairs_checked, 1000u);

  const auto nagel = check_absorption(TernaryOp(TernaryKind::nagel_comixer, NormSpec::lp(2)), pairs);
  EXPECT_FALSE(nagel.pass);
  ASSERT_TRUE(nagel.witness);
  const auto& [x, y] = *nagel.witness;
  EXPECT_NEAR(nagel.worst_violation, dist(x, y, NormSpec::lp(2)), 1e-12);
  double farthest = 0;
  for (const auto& [p, q] : pairs) farthest = std::max(farthest, dist(p, q, NormSpec::lp(2)));
  EXPECT_NEAR(nagel.worst_violation, farthest, 1e-12);
}

TEST(AntiAbsorption, Examples) {
  std::mt19937_64 gen(15);
  const auto pairs = random_pairs(gen, 2, 1000);
  EXPECT_TRUE(check_anti_absorption(TernaryOp(TernaryKind::nagel_comixer, NormSpec::lp(2)), pairs).pass);
  const auto grp = check_anti_absorption(TernaryOp(TernaryKind::group_comixer_1d, NormSpec{}), pairs);
  EXPECT_TRUE(grp.pass);
  EXPECT_EQ(grp.worst_violation, 0.0);
  EXPECT_FALSE(check_anti_absorption(TernaryOp(TernaryKind::incenter_mixer, NormSpec::lp(2)), pairs).pass);
}

TEST(Identities, HoldAcrossGrid) {
  std::mt19937_64 gen(16);
  for (std::size_t dim : {1u, 2u, 3u, 8u}) {
    const auto pairs = random_pairs(gen, dim, 500);
    for (const auto& spec : grid_norms()) {
      EXPECT_TRUE(check_absorption(TernaryOp(TernaryKind::incenter_mixer, spec), pairs).pass);
      EXPECT_TRUE(check_anti_absorption(TernaryOp(TernaryKind::nagel_comixer, spec), pairs).pass);
      EXPECT_EQ(check_absorption(TernaryOp(TernaryKind::median_mixer, spec), pairs).worst_violation, 0.0);
      EXPECT_EQ(check_anti_absorption(TernaryOp(TernaryKind::group_comixer_1d, spec), pairs).worst_violation, 0.0);
    }
  }
}

TEST(Symmetry, AllPermutations) {
  std::mt19937_64 gen(17);
  for (std::size_t dim : {1u, 2u, 3u, 8u}) {
    for (const auto& spec : grid_norms()) {
      for (int i = 0; i < 200; ++i) {
        std::array<Vector, 3> t{random_vector(gen, dim), random_vector(gen, dim), random_vector(gen, dim)};
        const Vector s0 = incenter_mixer(t[0], t[1], t[2], spec);
        const Vector n0 = nagel_comixer(t[0], t[1], t[2], spec);
        std::array<int, 3> idx{0, 1, 2};
        while (std::next_permutation(idx.begin(), idx.end())) {
          expect_near(incenter_mixer(t[idx[0]], t[idx[1]], t[idx[2]], spec), s0, 1e-12);
          expect_near(nagel_comixer(t[idx[0]], t[idx[1]], t[idx[2]], spec), n0, 1e-12);
        }
      }
    }
  }
}

TEST(Equivariance, TranslationAndScaling) {
  std::mt19937_64 gen(18);
  std::uniform_real_distribution<double> lam(-3.0, 3.0);
  for (std::size_t dim : {1u, 2u, 3u, 8u}) {
    for (const auto& spec : grid_norms()) {
      for (int i = 0; i < 200; ++i) {
        const Vector a = random_vector(gen, dim), b = random_vector(gen, dim), c = random_vector(gen, dim);
        const Vector v = random_vector(gen, dim);
        const double l = lam(gen);
        for (auto kind : {TernaryKind::incenter_mixer, TernaryKind::nagel_comixer}) {
          const TernaryOp op(kind, spec);
          expect_near(op(a + v, b + v, c + v), op(a, b, c) + v, 1e-10);
          expect_near(op(l * a, l * b, l * c), l * op(a, b, c), 1e-10);
        }
      }
    }
  }
}

TEST(TernaryOp, DeterministicAndNamed) {
  const TernaryOp op(TernaryKind::nagel_comixer, NormSpec::lp(1.5));
  const Vector a{0.1, 0.7}, b{-0.3, 0.2}, c{0.9, -0.4};
  EXPECT_EQ(op(a, b, c), op(a, b, c));
  for (auto kind : {TernaryKind::incenter_mixer, TernaryKind::nagel_comixer, TernaryKind::median_mixer,
                    TernaryKind::group_comixer_1d}) {
    EXPECT_EQ(parse_kind(kind_name(kind)), kind);
  }
  EXPECT_FALSE(parse_kind("centroid"));
  EXPECT_TRUE(is_mixer(TernaryKind::median_mixer));
  EXPECT_TRUE(is_comixer(TernaryKind::group_comixer_1d));
}

TEST(Interchange, Examples) {
  const TernaryOp nagel(TernaryKind::nagel_comixer, NormSpec::lp(2));
  const auto f = interchange_map(nagel, {0}, {1});
  EXPECT_NEAR(f({0})[0], 1.0, 1e-15);
  EXPECT_NEAR(f({1})[0], 0.0, 1e-15);

  const auto id = interchange_map(nagel, {0.3, 0.1}, {0.3, 0.1});
  std::mt19937_64 gen(19);
  for (int i = 0; i < 100; ++i) {
    const Vector x = random_vector(gen, 2);
    expect_near(id(x), x, 1e-12);
  }

  const auto g = interchange_map(TernaryOp(TernaryKind::group_comixer_1d, NormSpec{}), {0}, {1});
  EXPECT_EQ(g({0.5}), (Vector{0.5}));
  EXPECT_EQ(g({0}), (Vector{1}));
  EXPECT_EQ(g({1}), (Vector{0}));
  EXPECT_THROW(interchange_map(TernaryOp(TernaryKind::median_mixer, NormSpec{}), {0}, {1}), domain_error);
}

TEST(Interchange, SwapsEndpointsInPlane) {
  std::mt19937_64 gen(20);
  for (const auto& spec : grid_norms()) {
    for (int i = 0; i < 200; ++i) {
      const Vector a = random_vector(gen, 2), b = random_vector(gen, 2);
      const auto f = interchange_map(TernaryOp(TernaryKind::nagel_comixer, spec), a, b);
      expect_near(f(a), b, 1e-10);
      expect_near(f(b), a, 1e-10);
    }
  }
}

TEST(Derivative, Examples) {
  const NormSpec l2 = NormSpec::lp(2);
  const double h = 1e-5;
  EXPECT_LE(derivative_bound_check(Section::incenter, {1}, {0.5}, {1}, l2, h), 1 + 1e-4);
  EXPECT_LE(derivative_bound_check(Section::nagel, {1}, {0.5}, {1}, l2, h), 1 + 1e-4);
  // On the ray x = t a, t > 1, the weights give (t a + t a) / (2t) = a, so the
  // section is constant there.
  const Vector a{0.6, 0.8};
  expect_near(incenter_mixer(Vector::zeros(2), a, 2.0 * a, l2), a, 1e-15);
  expect_near(incenter_mixer(Vector::zeros(2), a, 3.0 * a, l2), a, 1e-15);
  EXPECT_NEAR(derivative_bound_check(Section::incenter, a, 2.5 * a, a, l2, h), 0.0, 1e-9);
}

TEST(Derivative, RejectsBadArguments) {
  const NormSpec l2 = NormSpec::lp(2);
  EXPECT_THROW(derivative_bound_check(Section::incenter, {2}, {0.5}, {1}, l2), domain_error);
  EXPECT_THROW(derivative_bound_check(Section::incenter, {1}, {0.5}, {0.5}, l2), domain_error);
  EXPECT_THROW(derivative_bound_check(Section::incenter, {1}, {1e-6}, {1}, l2), domain_error);
  EXPECT_THROW(derivative_bound_check(Section::incenter, {1}, {1 + 1e-6}, {1}, l2), domain_error);
  EXPECT_THROW(derivative_bound_check(Section::incenter, {1}, {0.5}, {1}, l2, 0.0), domain_error);
}

TEST(Derivative, BoundedByOneAtSmoothPoints) {
  std::mt19937_64 gen(21);
  const double h = 1e-5;
  for (std::size_t dim : {2u, 3u}) {
    for (const auto& spec : {NormSpec::lp(1.5), NormSpec::lp(2), NormSpec::lp(3)}) {
      for (int i = 0; i < 300; ++i) {
        Vector a = random_vector(gen, dim);
        a /= norm(a, spec);
        Vector u = random_vector(gen, dim);
        u /= norm(u, spec);
        const Vector x = random_vector(gen, dim);
        if (norm(x, spec) < 1e-3 || dist(x, a, spec) < 1e-3) continue;
        for (auto section : {Section::incenter, Section::nagel}) {
          EXPECT_LE(derivative_bound_check(section, a, x, u, spec, h), 1 + 10 * h + 1e-8);
        }
      }
    }
  }
}
