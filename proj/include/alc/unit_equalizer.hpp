#pragma once

#include <vector>

#include "alc/linalg.hpp"
#include "alc/numberfield.hpp"

namespace alc {

// l(u) = (log |sigma_i(u)|^2)_i over the n embedding components.
RVec log_embed(const FieldElement& u);

struct LogLattice {
  NumberField field = NumberField::quadratic(-1);
  std::vector<FieldElement> units;  // fundamental units
  FieldElement torsion;             // generator of the roots of unity
  int torsion_order = 2;
  RMat generators;                  // n x r, columns l(u_i)
  double regulator = 0;             // |det| of the generators with the last row dropped
  // Quantization radius: R_K/2 in rank 1 (the deep-hole offset of one log
  // coordinate), Euclidean covering radius in higher rank.
  double rho = 0;
  double covering_radius = 0;       // Euclidean, any rank

  int rank() const { return static_cast<int>(generators.cols()); }
  int n() const { return static_cast<int>(generators.rows()); }
  FieldElement unit(const std::vector<long>& exponents) const;
};

// Fundamental units by bounded search; throws if the found units do not
// generate every unit seen in the search box.
LogLattice build_log_lattice(const NumberField& K, int coord_bound = 8);

// Euclidean covering radius of the lattice spanned by the columns of G.
double covering_radius(const RMat& G);

struct UnitQuantization {
  FieldElement u;
  std::vector<long> exponents;
  CVec U;  // diagonal of diag(sigma_i(u))
  CVec E;  // diagonal of H U^{-1}
  double error_norm = 0;  // Frobenius norm of E
};

// Nearest unit for a normalized diagonal channel (prod |h_i|^2 = 1 within 1e-9).
// Ties go to the lexicographically smallest exponent vector.
UnitQuantization quantize_channel(const CVec& h, const LogLattice& L);

}  // namespace alc
