#include <cmath>
#include <random>

#include "alc/construction_a.hpp"
#include "alc/intmat.hpp"
#include "doctest.h"

using namespace alc;

namespace {
const NumberField& golden() {
  static const NumberField K = NumberField::by_name("Q(i,sqrt5)");
  return K;
}
IVec random_int(int n, std::mt19937_64& rng, int B = 40) {
  std::uniform_int_distribution<int> u(-B, B);
  IVec x(n);
  for (int i = 0; i < n; ++i) x(i) = u(rng);
  return x;
}
}  // namespace

TEST_CASE("volume of lifted codes matches the closed form") {
  const auto& K = golden();
  const auto s29 = split_prime(K, 29);
  std::mt19937_64 rng(10);
  for (auto [T, k] : std::vector<std::pair<int, int>>{{1, 0}, {1, 1}, {2, 1}, {4, 2}, {3, 3}, {3, 0}}) {
    const auto C = random_code(29, 1, T, k, rng);
    const auto L = lift_compound(K, s29, C);
    CHECK(L.lattice.volume() == doctest::Approx(L.formula_volume()).epsilon(1e-9));
    CHECK(L.lattice.dim() == 4 * T);
  }
  // Full space: V = 2^{-2T} sqrt(400)^T = 5^T.
  const auto full = lift_compound(K, s29, full_code(s29.residue_field, 2));
  CHECK(full.lattice.volume() == doctest::Approx(25.0).epsilon(1e-9));
  // Residue degree two: F_9 codes.
  const auto s3 = split_prime(K, 3);
  const auto C9 = random_code(3, 2, 3, 1, rng);
  const auto L9 = lift_compound(K, s3, C9, 0.5);
  CHECK(L9.unscaled_volume() == doctest::Approx(L9.formula_volume()).epsilon(1e-9));
  CHECK(L9.formula_volume() == doctest::Approx(std::pow(5.0, 3) * std::pow(3.0, 4)).epsilon(1e-12));
  CHECK_THROWS(lift_compound(K, s29, C9));
}

TEST_CASE("discriminant matches the embedded ring of integers") {
  for (const char* name : {"Q(i,sqrt5)", "Q(sqrt13)", "Q(i)", "Q(sqrt2,sqrt5)"}) {
    const auto K = NumberField::by_name(name);
    const double V = std::abs(block_embedding(K, 1).determinant());
    const double D = std::pow(2.0, K.complex_places()) * V;
    CHECK(D * D == doctest::Approx(std::abs(static_cast<double>(K.discriminant()))).epsilon(1e-9));
  }
}

TEST_CASE("membership agrees with the residue map") {
  const auto& K = golden();
  std::mt19937_64 rng(11);
  for (std::uint32_t p : {29u, 3u}) {
    const auto s = split_prime(K, p);
    const auto C = random_code(p, s.l, 3, 1, rng);
    const auto L = lift_compound(K, s, C);
    int inside = 0;
    for (int trial = 0; trial < 300; ++trial) {
      IVec x = random_int(12, rng);
      if (trial % 2) {
        // Force membership: random lattice combination.
        x = L.int_basis * random_int(12, rng, 3);
      }
      const bool res = L.contains_int(x);
      CHECK(res == L.lattice.contains(L.embed(x)));
      inside += res;
    }
    CHECK(inside >= 150);
  }
}

TEST_CASE("Hermite form is invariant under unit multiplication") {
  const auto& K = golden();
  const auto s = split_prime(K, 29);
  std::mt19937_64 rng(12);
  const auto L = lift_compound(K, s, random_code(29, 1, 2, 1, rng));
  const IMat H = hermite_form(L);
  CHECK(H == hnf_mod(L.int_basis, 29));
  const auto theta = K.element_int({0, 0, 1, 0});
  const auto i = K.element_int({0, 1, 0, 0});
  std::uniform_int_distribution<int> e(-6, 6);
  for (int t = 0; t < 20; ++t) {
    const auto u = theta.pow(e(rng)) * i.pow(t % 4);
    CHECK(hermite_form_times_unit(L, u) == H);
  }
  // A non-unit changes the lattice.
  CHECK_THROWS(hermite_form_times_unit(L, K.integer(2)));
}

TEST_CASE("modular Hermite form is canonical") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> u(-50, 50);
  IMat G(3, 3);
  for (int i = 0; i < 9; ++i) G(i / 3, i % 3) = u(rng);
  G.col(0) *= 1;
  IMat U(3, 3);
  U << 1, 2, 0, 0, 1, 0, 3, -1, 1;  // unimodular
  IMat both(3, 6);
  both << G * U, IMat::Identity(3, 3) * 97;
  IMat G2(3, 6);
  G2 << G, 97 * IMat::Identity(3, 3);
  CHECK(hnf_mod(both, 97) == hnf_mod(G2, 97));
  const IMat H = hnf_mod(G2, 97);
  for (int i = 0; i < 3; ++i) {
    CHECK(H(i, i) > 0);
    for (int j = 0; j < i; ++j) {
      CHECK(H(i, j) == 0);
      CHECK(H(j, i) >= 0);
      CHECK(H(j, i) < H(i, i));
    }
  }
}

TEST_CASE("nested codes give nested lattices") {
  const auto& K = golden();
  const auto s = split_prime(K, 29);
  std::mt19937_64 rng(14);
  const auto C2 = random_code(29, 1, 3, 2, rng);
  const LinearCode C1(C2.field, 3, {C2.G[0]});
  const auto L1 = lift_compound(K, s, C1), L2 = lift_compound(K, s, C2);
  for (int c = 0; c < L1.int_basis.cols(); ++c) CHECK(L2.contains_int(L1.int_basis.col(c)));
  // The second generator's lift lies in L2 but not in L1.
  IVec x = IVec::Zero(12);
  for (int t = 0; t < 3; ++t) x(4 * t) = C2.G[1][t].a;
  // Integral basis coordinate 0 is 1, and 1 maps to 1 under the residue map.
  CHECK(L2.contains_int(x));
  CHECK_FALSE(L1.contains_int(x));
}

TEST_CASE("minimum norm of the prime-ideal lattice") {
  const auto& K = golden();
  for (std::uint32_t p : {29u, 41u, 61u}) {
    const auto s = split_prime(K, p);
    for (int T : {1, 2}) {
      const auto L = lift_compound(K, s, zero_code(s.residue_field, T));
      const double n = K.num_embeddings();
      CHECK(shortest_length2(L.lattice) >= T * std::pow(p, 1.0 / n) * (1 - 1e-9));
      // Per-block AM-GM bound: |sigma(x)|^2 >= m p^{1/m} for x in P, x != 0.
      CHECK(shortest_length2(L.lattice) >= n * std::pow(p, 1.0 / n) * (1 - 1e-9));
    }
  }
}

TEST_CASE("ergodic construction") {
  const auto K = NumberField::by_name("Q(sqrt13)");
  const auto s = split_prime(K, 3);
  const GaloisField F3(3, 1);
  const LinearCode C(F3, 2, {{F3.one(), F3.one()}});
  const auto L = lift_ergodic(K, s, C);
  IVec one(2);
  one << 1, 0;
  CHECK(L.lattice.contains(L.embed(one)));
  for (int j = 0; j < 2; ++j) {
    IVec v = IVec::Zero(2);
    v(j) = 3;
    CHECK(L.lattice.contains(L.embed(v)));
  }
  CHECK(L.lattice.volume() == doctest::Approx(3 * std::sqrt(13.0)).epsilon(1e-9));
  CHECK(L.lattice.volume() == doctest::Approx(L.formula_volume()).epsilon(1e-9));
  const auto Z = lift_ergodic(K, s, zero_code(F3, 2));
  CHECK(Z.lattice.volume() == doctest::Approx(9 * std::sqrt(13.0)).epsilon(1e-9));
  // Complex field: two relative embeddings.
  const auto& G = golden();
  const auto s29 = split_prime(G, 29);
  std::mt19937_64 rng(15);
  for (int k : {0, 1, 2}) {
    const auto E = lift_ergodic(G, s29, random_code(29, 1, 2, k, rng));
    CHECK(E.lattice.volume() == doctest::Approx(E.formula_volume()).epsilon(1e-9));
  }
  CHECK_THROWS(lift_ergodic(K, s, random_code(3, 1, 3, 1, rng)));
}

TEST_CASE("unit twist") {
  const auto K = NumberField::by_name("Q(sqrt13)");
  const auto s = split_prime(K, 3);
  std::mt19937_64 rng(16);
  const auto eps = K.element_int({1, 1});  // (3 + sqrt13)/2
  CHECK(K.norm(eps) == Rational(-1));
  std::uniform_int_distribution<int> kk(0, 2);
  for (int t = 0; t < 100; ++t) {
    const auto L = lift_ergodic(K, s, random_code(3, 1, 2, kk(rng), rng));
    const auto same = unit_twist(L, K.one());
    CHECK(same_lattice(same.lattice.basis(), L.lattice.basis()));
    const auto tw = unit_twist(L, eps.pow(1 + t % 3));
    CHECK(tw.code.k == L.code.k);
    CHECK(tw.lattice.volume() == doctest::Approx(L.lattice.volume()).epsilon(1e-9));
  }
  CHECK_THROWS(unit_twist(lift_ergodic(K, s, zero_code(GaloisField(3, 1), 2)), K.integer(2)));
}

TEST_CASE("random codes") {
  std::mt19937_64 a(17), b(17);
  const auto c1 = random_code(29, 1, 6, 3, a), c2 = random_code(29, 1, 6, 3, b);
  CHECK(c1.G == c2.G);
  std::mt19937_64 rng(18);
  for (int t = 0; t < 10000; ++t) {
    const auto c = random_code(3, 1, 4, 2, rng);
    CHECK(rank(c.field, c.G) == 2);
  }
  const auto full = random_code(5, 1, 3, 3, rng);
  CHECK(full.size() == 125);
}

TEST_CASE("Reed-Solomon bounded-distance decoding") {
  std::mt19937_64 rng(19);
  const ReedSolomon rs(89, 32, 24);
  const auto& C = rs.code();
  const GaloisField& F = C.field;
  std::uniform_int_distribution<int> sym(0, 88), pos(0, 31);
  for (int t = 0; t < 50; ++t) {
    Word msg(24);
    for (auto& x : msg) x = F.from_int(sym(rng));
    Word w = C.encode(msg);
    CHECK(C.contains(w));
    const int errs = t % (rs.max_errors() + 1);
    for (int e = 0; e < errs; ++e) {
      const int i = pos(rng);
      w[i] = F.add(w[i], F.from_int(1 + sym(rng) % 88));
    }
    const auto dec = rs.decode(w);
    REQUIRE(dec.has_value());
    CHECK(*dec == msg);
  }
}
