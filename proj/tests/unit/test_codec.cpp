#include <gtest/gtest.h>

#include <random>

#include "quantlab/codec.hpp"
#include "support/oracles.hpp"

using namespace quantlab;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

const NormModel kQuad = NormModel::separable_quadratic(vec({1, 1}));
const Basis kId = Basis::identity(2);

}  // namespace

TEST(Encode, Examples) {
  EXPECT_TRUE(encode(vec({0.05, -0.1}), 0.25, kQuad, kId).entries.empty());

  const Code a = encode(vec({0.5, 0.1}), 0.25, kQuad, kId);
  ASSERT_EQ(a.size(), 1);
  EXPECT_EQ(a.entries[0].index, 1);
  EXPECT_DOUBLE_EQ(a.entries[0].value, 0.375);

  const Code b = encode(vec({-0.5, 0.95}), 0.25, kQuad, kId);
  ASSERT_EQ(b.size(), 2);
  EXPECT_EQ(b.entries[0], (CodeEntry{1, -0.375}));
  EXPECT_EQ(b.entries[1], (CodeEntry{2, 0.875}));
  EXPECT_EQ(b.tau, 0.25);
  EXPECT_EQ(b.n, 2);
}

TEST(Decode, Examples) {
  const DecodeResult zero = decode(Code{0.25, 2, {}}, kQuad, kId);
  EXPECT_TRUE(zero.k.is_zero());
  EXPECT_EQ(zero.reconstruction, Vector::Zero(2));

  const DecodeResult a = decode(Code{0.25, 2, {{1, 0.375}}}, kQuad, kId);
  EXPECT_EQ(a.k.k, (std::vector<std::int64_t>{2, 0}));
  EXPECT_DOUBLE_EQ(a.reconstruction(0), 0.5);
  EXPECT_DOUBLE_EQ(a.reconstruction(1), 0.0);

  const DecodeResult b = decode(Code{0.25, 2, {{1, -0.375}}}, kQuad, kId);
  EXPECT_EQ(b.k.k, (std::vector<std::int64_t>{-2, 0}));
  EXPECT_DOUBLE_EQ(b.reconstruction(0), -0.5);
}

TEST(Decode, RejectsMalformedCodes) {
  const auto expect_code = [](const Code& c, ErrorCode want) {
    try {
      decode(c, kQuad, kId);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), want);
    }
  };
  expect_code(Code{0.25, 2, {{2, 0.375}, {1, 0.125}}}, ErrorCode::inconsistent_code);  // unsorted
  expect_code(Code{0.25, 2, {{3, 0.375}}}, ErrorCode::inconsistent_code);              // out of range
  expect_code(Code{0.25, 2, {{1, 0.3}}}, ErrorCode::inconsistent_code);                // not an edge
  expect_code(Code{-1.0, 2, {}}, ErrorCode::inconsistent_code);
}

TEST(Decode, AmbiguousFaceAndEdgeLanding) {
  // surrogate gradient 2 Q c with Q = [[1, 1/3], [1/3, 1]]
  Matrix q(2, 2);
  q << 1.0, 1.0 / 3.0, 1.0 / 3.0, 1.0;
  const NormModel f = NormModel::ellipsoidal(q);
  // both coordinates coded; component 1 of Q c vanishes at (-0.125, 0.375)
  try {
    decode(Code{0.25, 2, {{1, -0.125}, {2, 0.375}}}, f, kId);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ambiguous_face);
  }
  // only coordinate 2 coded; the free minimizer c1 = -c2 / 3 = -0.125 is an edge
  try {
    decode(Code{0.25, 2, {{2, 0.375}}}, f, kId);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::inconsistent_code);
  }
}

TEST(Codec, RoundTripRandom) {
  std::mt19937_64 rng(9);
  int checked = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const int n = 2 + trial % 4;
    const double tau = 0.25;
    const Basis b = trial % 2 ? Basis::identity(n) : Basis(oracle::well_conditioned_matrix(n, rng));
    const NormModel f = trial % 3 == 0 ? NormModel::separable_quadratic(oracle::uniform_vector(n, 0.5, 2, rng))
                        : trial % 3 == 1 ? NormModel::ellipsoidal(oracle::alternating_q(n))
                                         : NormModel::p_power(n, 3.0);
    const Vector u = oracle::uniform_vector(n, -1, 1, rng);
    const Code code = encode(u, tau, f, b);
    const DecodeResult d = decode(code, f, b);
    ASSERT_EQ(d.k, quantize(u, tau, b)) << "trial " << trial;
    EXPECT_LE((d.reconstruction - cell_center(d.k, tau, b)).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(code.size() == 0, quantize(u, tau, b).is_zero());
    EXPECT_EQ(decode(code, f, b).k, d.k);  // deterministic
    ++checked;
  }
  EXPECT_EQ(checked, 3000);
}

TEST(ReconstructionError, Examples) {
  EXPECT_EQ(reconstruction_error(vec({0.5, 0.0}), encode(vec({0.5, 0.0}), 0.25, kQuad, kId), kQuad, kId,
                                 NormModel::l1(2)),
            0.0);
  const Vector u = vec({0.5, 0.1});
  EXPECT_NEAR(reconstruction_error(u, encode(u, 0.25, kQuad, kId), kQuad, kId, NormModel::l1(2)), 0.1, 1e-15);
}

TEST(ReconstructionError, MatchesDirectRecomputation) {
  std::mt19937_64 rng(10);
  const NormModel e = NormModel::euclidean(3);
  for (int trial = 0; trial < 200; ++trial) {
    const Basis b(oracle::well_conditioned_matrix(3, rng));
    const Vector u = oracle::uniform_vector(3, -1, 1, rng);
    const double tau = 0.2;
    // independent: floor-based cell index through a separate linear solve
    const Vector c = b.matrix().partialPivLu().solve(u);
    Vector center(3);
    for (int i = 0; i < 3; ++i) center(i) = tau * std::floor(c(i) / tau + 0.5);
    const double ref = (u - b.matrix() * center).norm();
    const NormModel f = NormModel::ellipsoidal(oracle::alternating_q(3));
    EXPECT_NEAR(reconstruction_error(u, encode(u, tau, f, b), f, b, e), ref, 1e-12);
  }
}
