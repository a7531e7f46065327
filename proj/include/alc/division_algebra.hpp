#pragma once

#include <string>
#include <vector>

#include "alc/lattice.hpp"
#include "alc/numberfield.hpp"

namespace alc {

// Cyclic algebra (K/Q(i), beta, gamma) of degree 2: elements x0 + e x1 with
// x e = e beta(x) and e^2 = gamma.
struct CyclicAlgebra {
  NumberField K = NumberField::quadratic(-1);
  FieldElement gamma;
  int beta_sa = -1;  // beta as an automorphism of K (signs on sqrt c, sqrt d)
  int beta_sb = 1;
  std::string name;

  // Golden-code algebra: K = Q(i, sqrt5), beta: sqrt5 -> -sqrt5, gamma = i.
  static CyclicAlgebra golden();
  int degree() const { return 2; }
  FieldElement beta(const FieldElement& x) const { return K.automorphism(x, beta_sa, beta_sb); }
};

struct AlgebraElement {
  std::vector<FieldElement> x;  // x0, x1
};

AlgebraElement alg_add(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement alg_mul(const CyclicAlgebra& A, const AlgebraElement& a, const AlgebraElement& b);
// Element from 8 integral coordinates (x0 then x1).
AlgebraElement alg_from_int(const CyclicAlgebra& A, const IVec& c);

// [[s(x0), gamma s(beta x1)], [s(x1), s(beta x0)]] with s the first embedding.
CMat matrix_rep(const CyclicAlgebra& A, const AlgebraElement& a);
// Exact determinant of the representation, x0 beta(x0) - gamma x1 beta(x1).
FieldElement reduced_norm(const CyclicAlgebra& A, const AlgebraElement& a);

// Natural order O_K + e O_K, T blocks, each block the column-wise
// vectorization of X_a in C^4 (realified as [Re; Im] over all blocks).
ComplexLattice natural_order_lattice(const CyclicAlgebra& A, int T);
// (2^{-m} |gamma|^{m(m-1)/2} sqrt|Delta_K|)^{mT}
double natural_order_volume(const CyclicAlgebra& A, int T);

// Componentwise residue of X_a (entries in O_K) modulo the prime of split.
std::vector<std::vector<Fq>> reduce_algebra(const CyclicAlgebra& A, const AlgebraElement& a, const PrimeSplit& split);
// Sublattice of the natural order whose reduction vanishes, with its
// integral-coordinate basis.
ComplexLattice reduction_kernel_lattice(const CyclicAlgebra& A, const PrimeSplit& split, int T, IMat* int_basis = nullptr);

}  // namespace alc
