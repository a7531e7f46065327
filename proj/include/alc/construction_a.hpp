#pragma once

#include <optional>
#include <random>
#include <vector>

#include "alc/galois.hpp"
#include "alc/lattice.hpp"
#include "alc/numberfield.hpp"

namespace alc {

using Word = std::vector<Fq>;

// Linear (T, k) code over F_{p^l} given by a k x T generator of rank k.
struct LinearCode {
  GaloisField field;
  int T = 0;
  int k = 0;
  std::vector<Word> G;

  LinearCode() = default;
  LinearCode(GaloisField f, int T, std::vector<Word> generator);

  // (T - k) x T matrix whose kernel is the code.
  std::vector<Word> parity_check() const;
  bool contains(const Word& w) const;
  Word encode(const Word& msg) const;
  // Codewords as messages in F_{p^l}^k, enumerated by dense index.
  Word message(std::uint64_t index) const;
  std::uint64_t size() const;  // |C| = p^{lk}; throws if it overflows
};

LinearCode full_code(const GaloisField& f, int T);
LinearCode zero_code(const GaloisField& f, int T);
// Uniformly random k-dimensional code (rejection on rank-deficient generators).
LinearCode random_code(std::uint32_t p, int l, int T, int k, std::mt19937_64& rng);

// Reed-Solomon code over F_p, evaluation points 0, 1, ..., T-1, messages are
// polynomial coefficients of degree < k.
class ReedSolomon {
 public:
  ReedSolomon(std::uint32_t p, int T, int k);
  const LinearCode& code() const { return code_; }
  int max_errors() const { return (code_.T - code_.k) / 2; }
  // Bounded-distance decoding (Berlekamp-Welch); nullopt on failure.
  std::optional<Word> decode(const Word& received) const;

 private:
  LinearCode code_;
};

enum class Variant { Compound, Ergodic };

// Real coordinates of an embedded vector of T field elements. Complex fields use
// the realified layout [Re sigma(x); Im sigma(x)] with sigma(x) the m x T matrix
// form vectorized column by column; real fields stack the n real embeddings.
RMat block_embedding(const NumberField& K, int T);

struct ConstructionALattice {
  NumberField field = NumberField::quadratic(-1);
  PrimeSplit split;
  LinearCode code;
  Variant variant = Variant::Compound;
  double alpha = 1.0;
  int T = 0;          // number of blocks (1 for the ergodic variant)
  IMat int_basis;     // columns: integral coordinates (degree * T) of a Z-basis
  RMat embedding;     // integral coordinates -> real coordinates (unscaled)
  ComplexLattice lattice = ComplexLattice::from_real(RMat::Identity(1, 1));  // scaled by alpha

  // Volume predicted in closed form, before scaling.
  double formula_volume() const;
  double unscaled_volume() const { return lattice.volume() / std::pow(alpha, lattice.dim()); }
  // Residue vector of an element tuple (compound: one residue per block;
  // ergodic: residues of the conjugates of the single element).
  Word residues(const IVec& int_coords) const;
  bool contains_int(const IVec& int_coords) const;
  RVec embed(const IVec& int_coords) const;  // scaled
  // m x T complex matrix form of a realified lattice vector (complex fields only).
  CMat matrix_form(const RVec& v) const;
};

ConstructionALattice lift_compound(const NumberField& K, const PrimeSplit& split, const LinearCode& code,
                                   double alpha = 1.0);
// Code length must equal the number of embeddings n; split must have l = 1.
ConstructionALattice lift_ergodic(const NumberField& K, const PrimeSplit& split, const LinearCode& code,
                                  double alpha = 1.0);

// Integer matrix of multiplication by x in the integral basis.
IMat mult_matrix(const FieldElement& x);

// sigma(u) * Lambda_K(C1) = Lambda_K(C2) with C2 = diag(phi pi(sigma_j(u))) C1.
ConstructionALattice unit_twist(const ConstructionALattice& L, const FieldElement& u);

// Hermite normal form of the integral-coordinate lattice {x : x in L}, and of
// its image under block-diagonal multiplication by u.
IMat hermite_form(const ConstructionALattice& L);
IMat hermite_form_times_unit(const ConstructionALattice& L, const FieldElement& u);

}  // namespace alc
