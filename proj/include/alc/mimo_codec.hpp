#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "alc/construction_a.hpp"
#include "alc/lattice.hpp"
#include "alc/unit_equalizer.hpp"

namespace alc {

// Filtering pair for y = H x + w with rho = sigma_s^2 / sigma_w^2:
//   R^H R = H^H H + rho^{-1} I,   F^H R = H.
// rho = +inf gives the zero-forcing limit (R^H R = H^H H).
struct MmseFilter {
  CMat H;
  double rho = 0;
  CMat R;  // m x m upper triangular
  CMat F;  // m x n
};

MmseFilter mmse_matrices(const CMat& H, double rho);

// Largest entry of |sigma_s^2 (FH - R)(FH - R)^H + sigma_w^2 F F^H - sigma_w^2 I|.
double covariance_residual(const MmseFilter& f, double sigma_s, double sigma_w);

// kron(I_T, A): A applied to each of the T columns of a column-stacked matrix.
CMat block_diag(const CMat& A, int T);

struct Decoded {
  RVec point;   // realified lattice point
  IVec coeffs;  // in the lattice basis
  long nodes = 0;
};

// argmin_{x in L} |F y - R x|^2, exact, through cvp on the lattice R L.
// y stacks the T received columns (n T entries); L has complex dimension m T.
Decoded map_decode(const CVec& y, const ComplexLattice& L, const MmseFilter& f, long node_cap = kDefaultNodeCap);

// sigma_w^{-2} |y - H x|^2 + sigma_s^{-2} |x|^2 for a realified x.
double map_objective(const CVec& y, const CMat& H, const RVec& x, double sigma_s, double sigma_w);

// Unit equalization of a diagonal channel: D R = E U with U = diag(sigma(u)).
struct DecoupledParams {
  double D = 1;            // rho^{1/2} e^{-C/2m}; |det H^H H|^{-1/2m} when rho = inf
  UnitQuantization q;      // U and E
  double alpha = 0;        // |E^{-1}| (Frobenius)
};

DecoupledParams decoupled_params(const MmseFilter& f, const LogLattice& L);

// Channel-independent target D E^{-1} F y = U x + noise, stacked like y.
CVec decoupled_target(const CVec& y, const MmseFilter& f, const DecoupledParams& p);

// Returns the closest lattice point (realified) to a realified target.
using LatticeDecoder = std::function<RVec(const RVec&)>;

// Filtering, equalization, lattice decoding in L itself, then x = U^{-1} x~.
// The default inner decoder is exact cvp in L.
Decoded decoupled_decode(const CVec& y, const ComplexLattice& L, const MmseFilter& f, const DecoupledParams& p,
                         const LatticeDecoder& inner = nullptr, long node_cap = kDefaultNodeCap);

// Multiplies the complex coordinates of every block by diag(s).
RVec apply_diagonal(const RVec& x, const CVec& s);

// Zero forcing: decode H^{-1} y in L (square invertible H per block).
Decoded zero_forcing_decode(const CVec& y, const ComplexLattice& L, const CMat& H,
                            const LatticeDecoder& inner = nullptr, long node_cap = kDefaultNodeCap);

// Per-block integer multiplication by a field element (integral coordinates).
IVec multiply_blocks(const IVec& x, const FieldElement& u);

// Decoder for compound Construction A lattices over a Reed-Solomon code:
// per-position cvp in O_K, residues, Berlekamp-Welch, per-position cvp in the
// coset of the prime ideal. Not maximum likelihood.
class MultistageDecoder {
 public:
  MultistageDecoder(const ConstructionALattice& L, const ReedSolomon& rs);
  // Integral coordinates of the decoded point, or nullopt when the
  // Reed-Solomon stage fails.
  std::optional<IVec> decode(const RVec& target) const;
  // Realified block t (layout of a single-block embedding).
  RVec block(const RVec& v, int t) const;

 private:
  const ConstructionALattice* L_;
  const ReedSolomon* rs_;
  ComplexLattice ok_, ideal_;
  IMat ideal_basis_;
  RMat embed1_;
  std::vector<IVec> coset_reps_;  // lifts of every residue
};

// Rate bookkeeping: m log(pi e sigma_s^2) - (1/T) log V(L).
double lattice_rate(int m, int T, double sigma_s, double volume);

// Gap-to-capacity bounds, nats per channel use.
double gap_general(int m, double rho);        // log m + 2 rho
double gap_tight(double rho);                 // log(2 cosh rho), n = 2, rank 1
double gap_from_alpha(double alpha);          // 2 log alpha

struct GapBound {
  std::string source;
  int m = 0;
  double rho = 0;            // quantization radius, NaN for the MIMO entry
  double alpha = 0;          // error-norm bound behind the reported gap
  double general = 0;        // log m + 2 rho (NaN for MIMO)
  double tight = 0;          // log(2 cosh rho) when m = 2 and the rank is 1, else NaN
  double gap = 0;            // best available bound
  std::string note;
};

GapBound gap_bound(const LogLattice& L);

// Catalogued entries: "quartic-min" (x^4 - x + 1, discriminant 229, the
// totally complex quartic of smallest regulator) and "mimo-2x2".
GapBound gap_bound(const std::string& catalog_name);
std::vector<std::string> gap_catalog();

}  // namespace alc
