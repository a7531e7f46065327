#include <cmath>
#include <random>

#include "alc/division_algebra.hpp"
#include "doctest.h"

using namespace alc;

namespace {
AlgebraElement random_element(const CyclicAlgebra& A, std::mt19937_64& rng, int B = 6) {
  std::uniform_int_distribution<int> u(-B, B);
  IVec c(8);
  for (int i = 0; i < 8; ++i) c(i) = u(rng);
  return alg_from_int(A, c);
}
}  // namespace

TEST_CASE("matrix representation of the golden algebra") {
  const auto A = CyclicAlgebra::golden();
  const AlgebraElement one{{A.K.one(), A.K.zero()}};
  CHECK((matrix_rep(A, one) - CMat::Identity(2, 2)).norm() < 1e-15);
  const AlgebraElement zero{{A.K.zero(), A.K.zero()}};
  CHECK(matrix_rep(A, zero).norm() == 0);
  // e^2 = gamma
  const AlgebraElement e{{A.K.zero(), A.K.one()}};
  const auto e2 = alg_mul(A, e, e);
  CHECK(e2.x[0] == A.gamma);
  CHECK(e2.x[1].is_zero());
  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    const auto a = random_element(A, rng), b = random_element(A, rng);
    const CMat lhs = matrix_rep(A, alg_mul(A, a, b));
    const CMat rhs = matrix_rep(A, a) * matrix_rep(A, b);
    CHECK((lhs - rhs).norm() < 1e-9 * (1 + rhs.norm()));
    const auto d = reduced_norm(A, a);
    CHECK(std::abs(A.K.embed(d)[0] - matrix_rep(A, a).determinant()) < 1e-9 * (1 + std::abs(A.K.embed(d)[0])));
  }
}

TEST_CASE("nonzero elements have nonzero determinant") {
  const auto A = CyclicAlgebra::golden();
  std::mt19937_64 rng(32);
  int checked = 0;
  for (int t = 0; t < 10000; ++t) {
    const auto a = random_element(A, rng, 4);
    if (a.x[0].is_zero() && a.x[1].is_zero()) continue;
    ++checked;
    const auto d = reduced_norm(A, a);
    CHECK_FALSE(d.is_zero());
    // The reduced norm lies in Z[i]: theta and i*theta coordinates vanish.
    CHECK(d.coords()[2].is_zero());
    CHECK(d.coords()[3].is_zero());
  }
  CHECK(checked > 9990);
}

TEST_CASE("natural order volume") {
  const auto A = CyclicAlgebra::golden();
  for (int T : {1, 2}) {
    const auto L = natural_order_lattice(A, T);
    CHECK(L.dim() == 8 * T);
    CHECK(L.volume() == doctest::Approx(natural_order_volume(A, T)).epsilon(1e-6));
  }
  CHECK(natural_order_volume(A, 1) == doctest::Approx(25.0));
}

TEST_CASE("componentwise reduction") {
  const auto A = CyclicAlgebra::golden();
  const auto s = split_prime(A.K, 29);
  std::mt19937_64 rng(33);
  const GaloisField& F = s.residue_field;
  const AlgebraElement zero{{A.K.zero(), A.K.zero()}};
  for (const auto& row : reduce_algebra(A, zero, s))
    for (const auto& v : row) CHECK(v.is_zero());
  for (int t = 0; t < 100; ++t) {
    const auto a = random_element(A, rng), b = random_element(A, rng);
    const auto ra = reduce_algebra(A, a, s), rb = reduce_algebra(A, b, s);
    const auto rab = reduce_algebra(A, alg_add(a, b), s);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(rab[i][j] == F.add(ra[i][j], rb[i][j]));
    const AlgebraElement pa{{a.x[0] * Rational(29), a.x[1] * Rational(29)}};
    for (const auto& row : reduce_algebra(A, pa, s))
      for (const auto& v : row) CHECK(v.is_zero());
  }
  IMat B;
  const auto Kl = reduction_kernel_lattice(A, s, 1, &B);
  CHECK(Kl.volume() == doctest::Approx(25.0 * std::pow(29.0, 4)).epsilon(1e-6));
  for (int c = 0; c < 8; ++c)
    for (const auto& row : reduce_algebra(A, alg_from_int(A, B.col(c)), s))
      for (const auto& v : row) CHECK(v.is_zero());
}

TEST_CASE("trace-determinant inequality") {
  const auto A = CyclicAlgebra::golden();
  const auto s = split_prime(A.K, 29);
  std::mt19937_64 rng(34);
  IMat B;
  reduction_kernel_lattice(A, s, 1, &B);
  std::uniform_int_distribution<int> u(-3, 3);
  for (int t = 0; t < 200; ++t) {
    IVec c(8);
    for (int i = 0; i < 8; ++i) c(i) = u(rng);
    if (c.isZero()) continue;
    const auto a = alg_from_int(A, B * c);
    const RMat psi = realify_map(matrix_rep(A, a));
    const double tr = (psi.transpose() * psi).trace();
    const double det = psi.determinant();
    CHECK(tr >= 4 * std::pow(det * det, 0.25) * (1 - 1e-9));
    // a = p b gives tr >= 4 p^2 since |det X_b| >= 1.
    const auto b = random_element(A, rng);
    if (b.x[0].is_zero() && b.x[1].is_zero()) continue;
    const AlgebraElement pb{{b.x[0] * Rational(29), b.x[1] * Rational(29)}};
    const RMat q = realify_map(matrix_rep(A, pb));
    CHECK((q.transpose() * q).trace() >= 4 * 29.0 * 29.0 * (1 - 1e-9));
  }
}
