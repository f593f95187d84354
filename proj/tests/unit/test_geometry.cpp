#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "quantlab/geometry.hpp"
#include "support/oracles.hpp"

using namespace quantlab;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

FacePattern pattern(std::initializer_list<int> s) {
  std::vector<std::int8_t> v;
  for (int x : s) v.push_back(static_cast<std::int8_t>(x));
  return FacePattern(v);
}

struct SetupA {
  Basis basis = Basis::identity(2);
  NormModel f = NormModel::separable_quadratic(vec({1, 1}));
  NormModel fd = NormModel::sup(2);
  double tau_prime = 1.0;
};

}  // namespace

TEST(Classify, Examples) {
  const SetupA s;
  const double tau = 0.25;
  const Classification a = classify(vec({0.1 * tau, 0}), tau, s.f, s.fd, s.basis);
  EXPECT_EQ(a.cls.pattern, pattern({0, 0}));
  EXPECT_EQ(a.distance, 0.0);

  const Classification b = classify(vec({1.0, 0}), tau, s.f, s.fd, s.basis);
  EXPECT_EQ(b.cls.pattern, pattern({1, 0}));
  EXPECT_NEAR(b.solve.minimizer(0), 0.125, 1e-15);
  EXPECT_NEAR(b.distance, 0.875, 1e-15);

  const Classification c = classify(vec({1.0, 1.0}), tau, s.f, s.fd, s.basis);
  EXPECT_EQ(c.cls.pattern, pattern({1, 1}));
  EXPECT_NEAR(c.distance, 0.875, 1e-15);
}

TEST(Classify, ClassCenterSitsOnTheActiveFaces) {
  const ClassId c{pattern({1, 0, -1}), 0.25};
  EXPECT_EQ(c.K(), 2);
  EXPECT_TRUE(c.center_coords().isApprox(vec({0.125, 0.0, -0.125})));
  // a datum pushed straight out of the center through those faces lands in
  // the same class
  const NormModel f = NormModel::separable_quadratic(vec({1, 2, 3}));
  const Classification r =
      classify(c.center(Basis::identity(3)) + vec({0.3, 0.0, -0.2}), 0.25, f, NormModel::sup(3), Basis::identity(3));
  EXPECT_EQ(r.cls.pattern, c.pattern);
}

TEST(Classify, RescaleTowardsClassCenterKeepsClass) {
  std::mt19937_64 rng(2);
  const SetupA s;
  for (int trial = 0; trial < 500; ++trial) {
    const Vector u = oracle::uniform_vector(2, -1, 1, rng);
    const Classification c = classify(u, 0.25, s.f, s.fd, s.basis);
    if (c.cls.K() == 0) continue;
    const Vector uc = c.cls.center(s.basis);
    for (double lambda : {1.0, 0.5, 0.1, 1e-3}) {
      const Classification r = classify(uc + lambda * (u - uc), 0.25, s.f, s.fd, s.basis);
      EXPECT_EQ(r.cls.pattern, c.cls.pattern);
    }
  }
}

TEST(Classify, RescaleAlongMinimizerRayForEllipsoid) {
  std::mt19937_64 rng(3);
  const NormModel f = NormModel::ellipsoidal(oracle::alternating_q(2));
  for (int trial = 0; trial < 300; ++trial) {
    const Vector u = oracle::uniform_vector(2, -1, 1, rng);
    const Classification c = classify(u, 0.25, f, NormModel::sup(2), Basis::identity(2));
    for (double lambda : {1.0, 0.5, 0.1}) {
      const Vector v = c.solve.minimizer + lambda * (u - c.solve.minimizer);
      EXPECT_EQ(classify(v, 0.25, f, NormModel::sup(2), Basis::identity(2)).cls.pattern, c.cls.pattern);
    }
  }
}

TEST(CellSupConstant, Examples) {
  EXPECT_DOUBLE_EQ(cell_sup_constant(NormModel::sup(2), Basis::identity(2)), 0.5);
  EXPECT_NEAR(cell_sup_constant(NormModel::euclidean(2), Basis::identity(2)), std::sqrt(2.0) / 2.0, 1e-15);
  try {
    cell_sup_constant(NormModel::sup(21), Basis::identity(21));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::dimension_too_large);
  }
}

TEST(CellSupConstant, BoundsDenseSampling) {
  std::mt19937_64 rng(4);
  const Basis b(oracle::well_conditioned_matrix(3, rng));
  const NormModel e = NormModel::euclidean(3);
  const double M = cell_sup_constant(e, b);
  double sampled = 0.0;
  for (int i = 0; i < 1'000'000; ++i)
    sampled = std::max(sampled, (b.matrix() * oracle::uniform_vector(3, -0.5, 0.5, rng)).norm());
  EXPECT_GE(M, sampled);
  EXPECT_LE(M - sampled, 0.01 * M);
}

TEST(CountGrid, SetupAExamples) {
  const SetupA s;
  const GridCount k1 = count_grid(1, 0.25, s.tau_prime, s.f, s.fd, s.basis);
  EXPECT_EQ(k1.count, 16);
  EXPECT_DOUBLE_EQ(k1.scaled, 4.0);
  const GridCount k2 = count_grid(2, 0.25, s.tau_prime, s.f, s.fd, s.basis);
  EXPECT_EQ(k2.count, 64);  // (2 * 4)^2: both indices in +-1..+-4
  EXPECT_DOUBLE_EQ(k2.scaled, 4.0);
  const GridCount k0 = count_grid(0, 0.25, s.tau_prime, s.f, s.fd, s.basis);
  EXPECT_EQ(k0.count, 1);
  EXPECT_DOUBLE_EQ(k0.scaled, 1.0);
  EXPECT_LE(k1.count_lo, k1.count);
  EXPECT_GE(k1.count_hi, k1.count);
}

TEST(CountGrid, PartitionOfTheBall) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 4; ++trial) {
    const Basis b(oracle::well_conditioned_matrix(3, rng));
    const NormModel f = NormModel::ellipsoidal(oracle::alternating_q(3));
    const GridCensus c = grid_census(0.2, 1.0, f, NormModel::euclidean(3), b);
    std::int64_t sum = c.degenerate;
    for (const auto& g : c.by_k) sum += g.count;
    EXPECT_EQ(sum, c.total_in_ball);
    // independent count of grid points in the ball
    std::int64_t direct = 0;
    const int R = 40;
    for (int i = -R; i <= R; ++i)
      for (int j = -R; j <= R; ++j)
        for (int k = -R; k <= R; ++k) {
          const Vector p = b.matrix() * (0.2 * vec({double(i), double(j), double(k)}));
          if (p.norm() <= 1.0) ++direct;
        }
    EXPECT_EQ(direct, c.total_in_ball);
  }
}

TEST(CountGrid, AsymptoticDoubling) {
  const SetupA s;
  for (const NormModel& f : {s.f, NormModel::ellipsoidal(oracle::alternating_q(2))}) {
    for (int K = 1; K <= 2; ++K) {
      const double c1 = count_grid(K, 1.0 / 32, 1.0, f, s.fd, s.basis).count;
      const double c2 = count_grid(K, 1.0 / 64, 1.0, f, s.fd, s.basis).count;
      EXPECT_NEAR(c2 / c1, std::pow(2.0, K), 0.15 * std::pow(2.0, K)) << f.describe() << " K=" << K;
    }
  }
}

TEST(CountGrid, IndependentOfWorkerCount) {
  std::mt19937_64 rng(6);
  const Basis b(oracle::well_conditioned_matrix(2, rng));
  const NormModel f = NormModel::p_power(2, 3.0);
  const GridCensus one = grid_census(0.05, 1.0, f, NormModel::euclidean(2), b, {}, {1, 100'000'000});
  const GridCensus four = grid_census(0.05, 1.0, f, NormModel::euclidean(2), b, {}, {4, 100'000'000});
  for (int K = 0; K <= 2; ++K) {
    EXPECT_EQ(one.by_k[K].count, four.by_k[K].count);
    EXPECT_EQ(one.by_k[K].count_lo, four.by_k[K].count_lo);
    EXPECT_EQ(one.by_k[K].count_hi, four.by_k[K].count_hi);
  }
}

TEST(CountGrid, BudgetGuard) {
  const SetupA s;
  try {
    count_grid(1, 1e-3, 1.0, s.f, s.fd, s.basis, {}, {1, 1000});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::enumeration_budget_exceeded);
    EXPECT_NE(std::string(e.what()).find("use tau >="), std::string::npos);
  }
}

TEST(EstimateAK, SetupALimits) {
  const SetupA s;
  const std::vector<double> ladder{0.25, 0.125, 0.0625, 0.03125, 0.015625};
  const StratumEstimate a1 = estimate_A_K(1, 1.0, s.f, s.fd, s.basis, ladder);
  EXPECT_DOUBLE_EQ(a1.estimate, 4.0);
  ASSERT_EQ(a1.table.size(), ladder.size());
  EXPECT_FALSE(a1.table[0].delta.has_value());
  EXPECT_DOUBLE_EQ(*a1.table[1].delta, 0.0);
  EXPECT_NEAR(estimate_A_K(2, 1.0, s.f, s.fd, s.basis, ladder).estimate, 4.0, 1e-12);
  for (const auto& row : estimate_A_K(0, 1.0, s.f, s.fd, s.basis, ladder).table)
    EXPECT_DOUBLE_EQ(row.scaled, 1.0);
  EXPECT_THROW(estimate_A_K(1, 1.0, s.f, s.fd, s.basis, {0.25, 0.125}), Error);
  EXPECT_THROW(estimate_A_K(1, 1.0, s.f, s.fd, s.basis, {0.25, 0.5, 0.125}), Error);
}

TEST(SliceUniqueness, SetupAClasses) {
  const SetupA s;
  for (const FacePattern& p : {pattern({1, 0}), pattern({1, 1})}) {
    const SliceReport r = check_slice_uniqueness(0.0625, 1.0, s.f, s.fd, s.basis, ClassId{p, 0.0625});
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.classes, 1);
    EXPECT_GT(r.grid_points, 0);
  }
  const SliceReport all = check_slice_uniqueness(0.0625, 1.0, s.f, s.fd, s.basis);
  EXPECT_TRUE(all.passed);
  EXPECT_EQ(all.classes, 8);  // 4 edges and 4 corners
}

TEST(SliceUniqueness, EllipsoidAndSkewedBasis) {
  std::mt19937_64 rng(7);
  const Basis b(oracle::well_conditioned_matrix(2, rng));
  const SliceReport r = check_slice_uniqueness(0.0625, 1.0, NormModel::ellipsoidal(oracle::alternating_q(2)),
                                               NormModel::euclidean(2), b);
  EXPECT_TRUE(r.passed);
  EXPECT_FALSE(r.witness.has_value());
}

TEST(SliceUniqueness, DegenerateGridPointsAreCountedNotClassified) {
  // with a dyadic coupling, grid points land exactly on faces with a zero
  // gradient; they are excluded and counted
  Matrix q(3, 3);
  q << 4, 0.5, 0, 0.5, 1, 0.5, 0, 0.5, 4;
  const SliceReport r =
      check_slice_uniqueness(0.0625, 1.0, NormModel::ellipsoidal(q), NormModel::sup(3), Basis::identity(3));
  EXPECT_TRUE(r.passed);
  EXPECT_GT(r.degenerate, 0);
  EXPECT_GT(r.grid_points, 0);
}

TEST(SliceUniqueness, DimensionLimit) {
  try {
    check_slice_uniqueness(0.5, 1.0, NormModel::euclidean(7), NormModel::sup(7), Basis::identity(7));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::dimension_too_large);
  }
}
