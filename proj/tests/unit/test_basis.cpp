#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "quantlab/basis.hpp"
#include "support/oracles.hpp"

using namespace quantlab;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST(Basis, IdentityCoordinatesAreTheVector) {
  const Basis b = Basis::identity(2);
  const Vector c = to_coords(vec({0.3, -0.7}), b);
  EXPECT_DOUBLE_EQ(c(0), 0.3);
  EXPECT_DOUBLE_EQ(c(1), -0.7);
}

TEST(Basis, ShearedBasisCoordinates) {
  Matrix m(2, 2);
  m << 1, 1, 0, 1;  // columns (1,0) and (1,1)
  const Basis b(m);
  const Vector c = to_coords(vec({2, 1}), b);
  EXPECT_NEAR(c(0), 1.0, 1e-15);
  EXPECT_NEAR(c(1), 1.0, 1e-15);
  EXPECT_FALSE(b.orthogonal());
}

TEST(Basis, RandomRoundTrip) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Basis b(oracle::well_conditioned_matrix(4, rng));
    const Vector u = oracle::uniform_vector(4, -3, 3, rng);
    EXPECT_LE((from_coords(to_coords(u, b), b) - u).cwiseAbs().maxCoeff(), 1e-10);
    // independent check of the coordinates through a fresh linear solve
    const Vector ref = b.matrix().colPivHouseholderQr().solve(u);
    EXPECT_LE((to_coords(u, b) - ref).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Basis, RejectsSingularAndIllConditioned) {
  Matrix singular(2, 2);
  singular << 1, 2, 2, 4;
  try {
    Basis b(singular);
    FAIL() << "singular basis accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ill_conditioned_basis);
  }
  Matrix bad = Matrix::Identity(2, 2);
  bad(1, 1) = 1e-9;
  EXPECT_THROW(Basis{bad}, Error);
}

TEST(Basis, OrthogonalDetection) {
  std::mt19937_64 rng(3);
  EXPECT_TRUE(Basis(oracle::orthonormal_matrix(5, rng)).orthogonal());
  Matrix diag = Matrix::Identity(3, 3);
  diag(0, 0) = 2.0;  // orthogonal, not orthonormal
  EXPECT_TRUE(Basis(diag).orthogonal());
}

TEST(Quantize, ExamplesOnIdentityBasis) {
  const Basis b = Basis::identity(2);
  const double tau = 0.25;
  EXPECT_EQ(quantize(vec({0.6 * tau, -0.2 * tau}), tau, b).k, (std::vector<std::int64_t>{1, 0}));
  EXPECT_EQ(quantize(vec({0.5, 0.1}), tau, b).k, (std::vector<std::int64_t>{2, 0}));
}

TEST(Quantize, HalfOpenEdges) {
  const Basis b = Basis::identity(2);
  const double tau = 0.5;  // tau/2 is exact in binary
  EXPECT_EQ(quantize(vec({tau / 2, -tau / 2}), tau, b).k, (std::vector<std::int64_t>{1, 0}));
  const double below = std::nextafter(tau / 2, 0.0);
  EXPECT_EQ(quantize(vec({below, 0.0}), tau, b).k[0], 0);
}

TEST(Quantize, RejectsNonFiniteInputAndBadTau) {
  const Basis b = Basis::identity(2);
  try {
    quantize(vec({std::numeric_limits<double>::quiet_NaN(), 0.0}), 0.25, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::non_finite_input);
  }
  EXPECT_THROW(quantize(vec({0.0, 0.0}), 0.0, b), Error);
  EXPECT_THROW(quantize(vec({0.0, 0.0}), -1.0, b), Error);
}

TEST(Quantize, PointLiesInItsCell) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const Basis b = trial % 2 ? Basis(oracle::well_conditioned_matrix(3, rng)) : Basis::identity(3);
    const double tau = std::uniform_real_distribution<double>(0.01, 1.0)(rng);
    const Vector u = oracle::uniform_vector(3, -2, 2, rng);
    const Cell cell{quantize(u, tau, b), tau};
    EXPECT_TRUE(cell.contains_coords(to_coords(u, b)));
  }
}

TEST(Quantize, GridTranslationEquivariance) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> shift(-5, 5);
  for (int trial = 0; trial < 1000; ++trial) {
    const Basis b = Basis::identity(3);
    const double tau = 0.125;  // dyadic, so shifts are exact
    const Vector u = oracle::uniform_vector(3, -1, 1, rng);
    QuantIndex m = QuantIndex::zero(3);
    for (int i = 0; i < 3; ++i) m[i] = shift(rng);
    const QuantIndex k = quantize(u, tau, b);
    const QuantIndex k2 = quantize(u + cell_center(m, tau, b), tau, b);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(k2[i], k[i] + m[i]);
  }
}

TEST(CellCenter, ExamplesAndRoundTrip) {
  const Basis id = Basis::identity(2);
  EXPECT_EQ(cell_center(QuantIndex::zero(2), 0.25, id), Vector::Zero(2));
  QuantIndex k = QuantIndex::zero(2);
  k[0] = 2;
  const Vector c = cell_center(k, 0.25, id);
  EXPECT_DOUBLE_EQ(c(0), 0.5);
  EXPECT_DOUBLE_EQ(c(1), 0.0);

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> idx(-50, 50);
  for (int trial = 0; trial < 500; ++trial) {
    const Basis b(oracle::well_conditioned_matrix(4, rng));
    QuantIndex r = QuantIndex::zero(4);
    for (int i = 0; i < 4; ++i) r[i] = idx(rng);
    EXPECT_EQ(quantize(cell_center(r, 0.1, b), 0.1, b), r);
  }
}

TEST(CellCenter, IsTheMidpointOfTheCell) {
  QuantIndex k = QuantIndex::zero(3);
  k[0] = -7;
  k[1] = 3;
  const Cell cell{k, 0.3};
  for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(cell.center(i), 0.5 * (cell.lower(i) + cell.upper(i)));
}
