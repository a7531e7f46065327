#include <cmath>
#include <map>
#include <random>

#include "alc/lattice.hpp"
#include "doctest.h"

using namespace alc;

namespace {

RMat random_basis(int n, std::mt19937_64& rng, double spread = 0.3) {
  std::normal_distribution<double> g(0, spread);
  RMat B = RMat::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) += g(rng);
  return B;
}

// Exhaustive closest point over the coefficient box that provably contains it:
// |x_i - (B^{-1} y)_i| <= |row_i(B^{-1})| * (Babai distance).
RVec brute_cvp(const RMat& B, const RVec& y) {
  const int n = static_cast<int>(B.cols());
  const RMat Bi = B.inverse();
  const RVec x0 = Bi * y;
  const RVec babai = B * x0.array().round().matrix();
  const double d = (babai - y).norm() * (1 + 1e-9);
  std::vector<std::int64_t> lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    const double r = Bi.row(i).norm() * d;
    lo[i] = static_cast<std::int64_t>(std::ceil(x0(i) - r));
    hi[i] = static_cast<std::int64_t>(std::floor(x0(i) + r));
  }
  std::vector<std::int64_t> x = lo;
  double best = INFINITY;
  RVec bestv;
  while (true) {
    RVec v = RVec::Zero(n);
    for (int i = 0; i < n; ++i) v += static_cast<double>(x[i]) * B.col(i);
    const double dd = (v - y).squaredNorm();
    if (dd < best) {
      best = dd;
      bestv = v;
    }
    int i = 0;
    while (i < n && x[i] == hi[i]) x[i] = lo[i], ++i;
    if (i == n) break;
    ++x[i];
  }
  return bestv;
}

}  // namespace

TEST_CASE("construction of complex lattices") {
  const auto Zi = ComplexLattice::from_gaussian(CMat::Identity(1, 1));
  CHECK(Zi.basis().isApprox(RMat::Identity(2, 2)));
  CHECK(Zi.volume() == doctest::Approx(1.0));
  CMat b(1, 1);
  b(0, 0) = cdouble(1, 1);
  CHECK(ComplexLattice::from_gaussian(b).volume() == doctest::Approx(2.0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  CMat B(3, 3);
  for (int i = 0; i < 9; ++i) B(i / 3, i % 3) = cdouble(g(rng), g(rng));
  CHECK(ComplexLattice::from_gaussian(B).volume() == doctest::Approx(std::norm(B.determinant())).epsilon(1e-9));
  CHECK(ComplexLattice::from_complex(ComplexLattice::from_gaussian(B).complex_basis()).basis().isApprox(
      ComplexLattice::from_gaussian(B).basis()));
  CHECK_THROWS(ComplexLattice::from_real(RMat::Zero(2, 2)));
}

TEST_CASE("volume-to-noise ratio conventions") {
  const auto Zi = ComplexLattice::from_gaussian(CMat::Identity(1, 1));
  const auto v = volume_vnr(Zi, 1.0);
  CHECK(v.vnr == doctest::Approx(1.0));
  CHECK(v.vnr_real == doctest::Approx(2.0));
  std::mt19937_64 rng(2);
  const auto L = ComplexLattice::from_real(random_basis(4, rng));
  const auto a = volume_vnr(L, 0.7), b = volume_vnr(L.scaled(1.9), 0.7);
  CHECK(b.volume == doctest::Approx(a.volume * std::pow(1.9, 4)));
  CHECK(b.vnr == doctest::Approx(a.vnr * 1.9 * 1.9));
}

TEST_CASE("dual lattice") {
  const auto Z4 = ComplexLattice::from_gaussian(CMat::Identity(2, 2));
  CHECK(same_lattice(Z4.dual().basis(), Z4.basis()));
  std::mt19937_64 rng(3);
  CMat B(2, 2);
  std::normal_distribution<double> g;
  for (int i = 0; i < 4; ++i) B(i / 2, i % 2) = cdouble(g(rng), g(rng));
  const auto L = ComplexLattice::from_gaussian(B);
  const auto D = L.dual();
  // Re(y^H x) integral on generators.
  const CMat Lc = L.complex_basis(), Dc = D.complex_basis();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double r = (Dc.col(j).adjoint() * Lc.col(i))(0, 0).real();
      CHECK(std::abs(r - std::round(r)) < 1e-9);
    }
  CHECK(L.volume() * D.volume() == doctest::Approx(1.0));
  CHECK(same_lattice(D.dual().basis(), L.basis()));
  CHECK(same_lattice(L.scaled(2.5).dual().basis(), D.scaled(1 / 2.5).basis()));
}

TEST_CASE("LLL returns a unimodular transform") {
  std::mt19937_64 rng(4);
  for (int n : {2, 5, 10, 20}) {
    RMat B = random_basis(n, rng, 3.0);
    const RMat B0 = B;
    const IMat U = lll(B);
    CHECK((B0 * U.cast<double>() - B).cwiseAbs().maxCoeff() < 1e-8 * (1 + B0.cwiseAbs().maxCoeff()));
    CHECK(std::abs(std::abs(U.cast<double>().determinant()) - 1.0) < 1e-6);
    // Size-reduced: |mu_ij| <= 1/2 up to rounding.
    Eigen::HouseholderQR<RMat> qr(B);
    const RMat R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 1; j < n; ++j)
      for (int i = 0; i < j; ++i) CHECK(std::abs(R(i, j) / R(i, i)) <= 0.5 + 1e-9);
  }
}

TEST_CASE("theta series") {
  const auto Z = ComplexLattice::from_real(RMat::Identity(1, 1));
  CHECK(theta(Z, 1.0) == doctest::Approx(1.086434811213308).epsilon(1e-12));
  const auto Z2 = ComplexLattice::from_real(RMat::Identity(2, 2));
  CHECK(std::abs(theta(Z2, 100.0) - 1.0) < 1e-10);
  std::mt19937_64 rng(5);
  const auto L = ComplexLattice::from_real(random_basis(3, rng));
  CHECK(theta(L.scaled(1.7), 0.4) == doctest::Approx(theta(L, 0.4 * 1.7 * 1.7)).epsilon(1e-10));
}

TEST_CASE("flatness factor") {
  const auto Zi = ComplexLattice::from_gaussian(CMat::Identity(1, 1));
  const auto f = flatness_both(Zi, 1.0, 1e-12);
  CHECK(std::abs(f.primal - f.dual) < 1e-8);
  CHECK(flatness(Zi, 6.0, 1e-300) < 1e-40);
  CHECK(flatness(Zi, 6.0, 1e-300) > 0);
  double prev = INFINITY;
  for (double s : {0.5, 1.0, 2.0, 4.0}) {
    const double e = flatness(Zi, s, 1e-300);
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("closest vector") {
  const auto Z2 = ComplexLattice::from_real(RMat::Identity(2, 2));
  RVec y(2);
  y << 0.6, 0.2;
  const auto r = cvp(Z2, y);
  CHECK(r.point(0) == doctest::Approx(1.0));
  CHECK(r.point(1) == doctest::Approx(0.0));
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g(0, 2);
  for (int n : {2, 4, 8}) {
    const RMat B = random_basis(n, rng);
    const auto L = ComplexLattice::from_real(B);
    IVec c(n);
    for (int i = 0; i < n; ++i) c(i) = static_cast<std::int64_t>(std::round(g(rng)));
    const auto self = cvp(L, L.point(c));
    CHECK(self.coeffs == c);
    CHECK(self.dist2 < 1e-20);
    for (int t = 0; t < 100; ++t) {
      RVec target(n);
      for (int i = 0; i < n; ++i) target(i) = g(rng);
      const auto got = cvp(L, target);
      const RVec want = brute_cvp(B, target);
      CHECK((got.point - want).norm() < 1e-9);
      CHECK((L.point(got.coeffs) - got.point).norm() < 1e-9);
    }
  }
}

TEST_CASE("closest vector ties are deterministic") {
  const auto Z = ComplexLattice::from_real(RMat::Identity(1, 1));
  RVec y(1);
  y << 0.5;
  CHECK(cvp(Z, y).coeffs(0) == 0);
  y << -0.5;
  CHECK(cvp(Z, y).coeffs(0) == -1);
}

TEST_CASE("enumeration budget") {
  std::mt19937_64 rng(7);
  const auto L = ComplexLattice::from_real(random_basis(8, rng));
  CHECK_THROWS_AS(enumerate_ball(L, RVec::Zero(8), 100.0, [](const IVec&, double) {}, 1000), BudgetExceeded);
}

TEST_CASE("discrete Gaussian sampler basics") {
  const auto Z = ComplexLattice::from_real(RMat::Identity(1, 1));
  std::mt19937_64 rng(8);
  const GaussianSampler s(Z, 2.0);
  double mean = 0;
  std::map<std::int64_t, int> counts;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double v = s.sample(rng)(0);
    mean += v;
    ++counts[static_cast<std::int64_t>(v)];
  }
  CHECK(std::abs(mean / n) < 0.05);
  for (const auto& [k, c] : counts)
    if (k > 0 && c >= n / 100) CHECK(std::abs(static_cast<double>(counts[-k]) / c - 1.0) < 0.1);
  // Non-orthogonal basis below the threshold is rejected.
  RMat B(2, 2);
  B << 1, 0.5, 0, 1;
  CHECK_THROWS(GaussianSampler(ComplexLattice::from_real(B), 1.0));
  CHECK_NOTHROW(GaussianSampler(ComplexLattice::from_real(B), 4.0));
}
