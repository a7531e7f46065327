#include <cmath>
#include <random>

#include "alc/unit_equalizer.hpp"
#include "doctest.h"

using namespace alc;

namespace {
const double kLogPhi = std::log((1 + std::sqrt(5.0)) / 2);

CVec random_normalized(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> lg(-5, 5), ph(0, 2 * M_PI);
  CVec h(n);
  double s = 0;
  for (int i = 0; i < n; ++i) {
    const double a = lg(rng);
    h(i) = std::polar(std::exp(a), ph(rng));
    s += 2 * a;
  }
  for (int i = 0; i < n; ++i) h(i) *= std::exp(-s / (2 * n));
  return h;
}
}  // namespace

TEST_CASE("log embedding") {
  const auto K = NumberField::by_name("Q(sqrt5)");
  CHECK(log_embed(K.one()).norm() < 1e-15);
  const auto phi = K.element_int({0, 1});
  const RVec v = log_embed(phi);
  CHECK(v(0) == doctest::Approx(2 * kLogPhi));
  CHECK(v(1) == doctest::Approx(-2 * kLogPhi));
  const auto u = phi.pow(3);
  CHECK((log_embed(u * phi) - log_embed(u) - log_embed(phi)).norm() < 1e-12);
  CHECK_THROWS(log_embed(K.integer(2)));
}

TEST_CASE("log lattices of the catalog fields") {
  const auto q5 = build_log_lattice(NumberField::by_name("Q(sqrt5)"));
  CHECK(q5.rank() == 1);
  CHECK(q5.regulator == doctest::Approx(2 * kLogPhi).epsilon(1e-12));
  CHECK(q5.rho == doctest::Approx(q5.regulator / 2));
  CHECK(q5.torsion_order == 2);

  const auto g = build_log_lattice(NumberField::by_name("Q(i,sqrt5)"));
  CHECK(g.rank() == 1);
  CHECK(g.n() == 2);
  CHECK(g.regulator == doctest::Approx(2 * kLogPhi).epsilon(1e-12));
  CHECK(g.torsion_order == 4);
  CHECK(g.rho == doctest::Approx(g.regulator / 2));

  const auto r4 = build_log_lattice(NumberField::by_name("Q(sqrt2,sqrt5)"));
  CHECK(r4.rank() == 3);
  CHECK(r4.n() == 4);
  CHECK(r4.regulator > 0);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(r4.generators.col(j).sum()) < 1e-9);
  CHECK(r4.rho == doctest::Approx(r4.covering_radius));
  MESSAGE("Q(sqrt2,sqrt5): regulator " << r4.regulator << ", covering radius " << r4.rho);

  const auto q13 = build_log_lattice(NumberField::by_name("Q(sqrt13)"));
  CHECK(q13.units[0] == q13.field.element_int({1, 1}));  // (3 + sqrt13)/2
}

TEST_CASE("covering radius of known lattices") {
  CHECK(covering_radius(RMat::Identity(2, 2)) == doctest::Approx(std::sqrt(0.5)));
  CHECK(covering_radius(RMat::Identity(3, 3)) == doctest::Approx(std::sqrt(0.75)));
  RMat hex(2, 2);
  hex << 1, 0.5, 0, std::sqrt(3.0) / 2;
  CHECK(covering_radius(hex) == doctest::Approx(1 / std::sqrt(3.0)));
}

TEST_CASE("channel quantization") {
  const auto q5 = build_log_lattice(NumberField::by_name("Q(sqrt5)"));
  CVec I = CVec::Ones(2);
  const auto qi = quantize_channel(I, q5);
  CHECK(qi.exponents == std::vector<long>{0});
  CHECK(qi.error_norm == doctest::Approx(std::sqrt(2.0)));
  const double p3 = std::pow((1 + std::sqrt(5.0)) / 2, 3);
  CVec h(2);
  h << p3, 1 / p3;
  const auto q3 = quantize_channel(h, q5);
  CHECK(q3.exponents == std::vector<long>{3});
  CHECK(std::abs(q3.E(0) - 1.0) < 1e-9);
  CHECK(std::abs(q3.E(1) + 1.0) < 1e-9);  // sigma_2(phi^3) = -phi^{-3}
  // Deep hole attains sqrt(2 cosh rho).
  h << std::exp(q5.regulator / 4), std::exp(-q5.regulator / 4);
  const auto dh = quantize_channel(h, q5);
  CHECK(dh.exponents == std::vector<long>{0});
  CHECK(dh.error_norm == doctest::Approx(std::sqrt(2 * std::cosh(q5.rho))).epsilon(1e-9));
  CHECK_THROWS(quantize_channel(CVec::Constant(2, 2.0), q5));
}

TEST_CASE("quantization error bounds and idempotence") {
  std::mt19937_64 rng(21);
  for (const char* name : {"Q(i,sqrt5)", "Q(sqrt2,sqrt5)"}) {
    const auto L = build_log_lattice(NumberField::by_name(name));
    const int n = L.n();
    for (int t = 0; t < 500; ++t) {
      const CVec h = random_normalized(n, rng);
      const auto q = quantize_channel(h, L);
      CHECK(q.error_norm <= std::sqrt(n) * std::exp(L.rho) * (1 + 1e-12));
      if (n == 2) CHECK(q.error_norm <= std::sqrt(2 * std::cosh(L.rho)) * (1 + 1e-12));
      for (int i = 0; i < n; ++i) CHECK(std::abs(q.E(i) * q.U(i) - h(i)) < 1e-9 * std::abs(h(i)));
      const auto again = quantize_channel(q.E, L);
      CHECK(std::all_of(again.exponents.begin(), again.exponents.end(), [](long e) { return e == 0; }));
    }
  }
}
