#include "alc/division_algebra.hpp"

#include <cmath>
#include <stdexcept>

namespace alc {

CyclicAlgebra CyclicAlgebra::golden() {
  CyclicAlgebra A;
  A.K = NumberField::by_name("Q(i,sqrt5)");
  A.gamma = A.K.element_int({0, 1, 0, 0});
  A.beta_sa = -1;
  A.beta_sb = 1;
  A.name = "golden";
  return A;
}

AlgebraElement alg_add(const AlgebraElement& a, const AlgebraElement& b) { return {{a.x[0] + b.x[0], a.x[1] + b.x[1]}}; }

AlgebraElement alg_mul(const CyclicAlgebra& A, const AlgebraElement& a, const AlgebraElement& b) {
  // (x0 + e x1)(y0 + e y1) = x0 y0 + gamma beta(x1) y1 + e (beta(x0) y1 + x1 y0)
  return {{a.x[0] * b.x[0] + A.gamma * A.beta(a.x[1]) * b.x[1], A.beta(a.x[0]) * b.x[1] + a.x[1] * b.x[0]}};
}

AlgebraElement alg_from_int(const CyclicAlgebra& A, const IVec& c) {
  const int n = A.K.degree();
  if (c.size() != 2 * n) throw std::invalid_argument("algebra element needs 2 * degree coordinates");
  std::vector<std::int64_t> c0(n), c1(n);
  for (int j = 0; j < n; ++j) {
    c0[j] = c(j);
    c1[j] = c(n + j);
  }
  return {{A.K.element_int(c0), A.K.element_int(c1)}};
}

namespace {
// X_a as a 2 x 2 matrix of O_K elements.
std::vector<FieldElement> entries(const CyclicAlgebra& A, const AlgebraElement& a) {
  // column-wise: (0,0), (1,0), (0,1), (1,1)
  return {a.x[0], a.x[1], A.gamma * A.beta(a.x[1]), A.beta(a.x[0])};
}
}  // namespace

CMat matrix_rep(const CyclicAlgebra& A, const AlgebraElement& a) {
  const auto e = entries(A, a);
  CMat X(2, 2);
  X(0, 0) = A.K.embed(e[0])[0];
  X(1, 0) = A.K.embed(e[1])[0];
  X(0, 1) = A.K.embed(e[2])[0];
  X(1, 1) = A.K.embed(e[3])[0];
  return X;
}

FieldElement reduced_norm(const CyclicAlgebra& A, const AlgebraElement& a) {
  return a.x[0] * A.beta(a.x[0]) - A.gamma * a.x[1] * A.beta(a.x[1]);
}

ComplexLattice natural_order_lattice(const CyclicAlgebra& A, int T) {
  if (T < 1) throw std::invalid_argument("T must be positive");
  const int n = A.K.degree();
  const int N = 2 * n * T;
  CMat Bc = CMat::Zero(4 * T, N);
  for (int t = 0; t < T; ++t)
    for (int c = 0; c < 2 * n; ++c) {
      IVec e = IVec::Zero(2 * n);
      e(c) = 1;
      const CMat X = matrix_rep(A, alg_from_int(A, e));
      Bc(4 * t + 0, t * 2 * n + c) = X(0, 0);
      Bc(4 * t + 1, t * 2 * n + c) = X(1, 0);
      Bc(4 * t + 2, t * 2 * n + c) = X(0, 1);
      Bc(4 * t + 3, t * 2 * n + c) = X(1, 1);
    }
  return ComplexLattice::from_complex(Bc, A.name + " natural order");
}

double natural_order_volume(const CyclicAlgebra& A, int T) {
  const double m = A.degree();
  const double g = std::abs(A.K.embed(A.gamma)[0]);
  const double D = std::abs(static_cast<double>(A.K.discriminant()));
  const double block = std::pow(2.0, -m) * std::pow(g, m * (m - 1) / 2) * std::sqrt(D);
  return std::pow(block, m * T);
}

std::vector<std::vector<Fq>> reduce_algebra(const CyclicAlgebra& A, const AlgebraElement& a, const PrimeSplit& split) {
  if (!(split.field == A.K)) throw std::invalid_argument("prime split belongs to another field");
  if (split.l != 1) throw std::invalid_argument("reduce_algebra needs a prime of residue degree one");
  const auto e = entries(A, a);
  return {{split.reduce(e[0]), split.reduce(e[2])}, {split.reduce(e[1]), split.reduce(e[3])}};
}

ComplexLattice reduction_kernel_lattice(const CyclicAlgebra& A, const PrimeSplit& split, int T, IMat* int_basis) {
  const int n = A.K.degree();
  const int N = 2 * n * T;
  const GaloisField Fp(split.p, 1);
  // Constraint rows: the four residues of every block.
  std::vector<std::vector<Fq>> cons(4 * T, std::vector<Fq>(N, Fp.zero()));
  for (int t = 0; t < T; ++t)
    for (int c = 0; c < 2 * n; ++c) {
      IVec e = IVec::Zero(2 * n);
      e(c) = 1;
      const auto R = reduce_algebra(A, alg_from_int(A, e), split);
      cons[4 * t + 0][t * 2 * n + c] = R[0][0];
      cons[4 * t + 1][t * 2 * n + c] = R[1][0];
      cons[4 * t + 2][t * 2 * n + c] = R[0][1];
      cons[4 * t + 3][t * 2 * n + c] = R[1][1];
    }
  auto work = cons;
  const auto pivots = rref(Fp, work);
  const auto ns = nullspace(Fp, cons, N);
  IMat B = IMat::Zero(N, N);
  int col = 0;
  for (const auto& v : ns) {
    for (int i = 0; i < N; ++i) B(i, col) = v[i].a;
    ++col;
  }
  for (int c : pivots) B(c, col++) = split.p;
  if (int_basis) *int_basis = B;
  const ComplexLattice O = natural_order_lattice(A, T);
  return ComplexLattice::from_real(O.basis() * B.cast<double>(), A.name + " reduction kernel");
}

}  // namespace alc
