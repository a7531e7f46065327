#include <cmath>
#include <random>
#include <vector>

#include "alc/kernels.hpp"
#include "doctest.h"

using namespace alc;

TEST_CASE("vector kernels agree with the scalar reference") {
  const Kernels& ref = kernels_for(Isa::Scalar);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0, 3);
  for (Isa isa : {Isa::Avx2, Isa::Neon}) {
    if (!isa_available(isa)) continue;
    const Kernels& k = kernels_for(isa);
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 17u, 64u, 1001u}) {
      std::vector<double> a(n), b(n), y1(n), y2(n);
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = g(rng);
        b[i] = g(rng);
        y1[i] = y2[i] = g(rng);
      }
      CHECK(k.dot(a.data(), b.data(), n) == doctest::Approx(ref.dot(a.data(), b.data(), n)).epsilon(1e-12));
      CHECK(k.sqdist(a.data(), b.data(), n) == doctest::Approx(ref.sqdist(a.data(), b.data(), n)).epsilon(1e-12));
      k.axpy(0.37, a.data(), y1.data(), n);
      ref.axpy(0.37, a.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-14));
      for (double scale : {-0.5, -1.0, -30.0, 0.8}) {
        const double r = ref.sum_exp(a.data(), n, scale);
        CHECK(k.sum_exp(a.data(), n, scale) == doctest::Approx(r).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("vector exp handles extreme arguments") {
  const Kernels& k = kernels();
  const std::vector<double> x{-800.0, -745.5, -700.0, -1e-300, 0.0, 1.0, 700.0, -3.5};
  const Kernels& ref = kernels_for(Isa::Scalar);
  for (double v : x) {
    const double got = k.sum_exp(&v, 1, 1.0);
    CHECK(got == doctest::Approx(ref.sum_exp(&v, 1, 1.0)).epsilon(1e-13));
  }
  std::vector<double> four{-800.0, -710.0, -1.0, 2.0};
  CHECK(k.sum_exp(four.data(), 4, 1.0) == doctest::Approx(std::exp(-710.0) + std::exp(-1.0) + std::exp(2.0)).epsilon(1e-13));
}
