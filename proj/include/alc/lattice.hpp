#pragma once

#include <functional>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>

#include "alc/linalg.hpp"

namespace alc {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr long kDefaultNodeCap = 50'000'000;

namespace detail {
struct Reduction;
struct ReductionCache;
}  // namespace detail

// A full-rank lattice stored by a real generator (columns). A complex lattice
// of complex dimension m is carried by its real equivalent of dimension 2m,
// with realified coordinates ordered [Re; Im].
class ComplexLattice {
 public:
  static ComplexLattice from_real(const RMat& B, std::string label = "");
  // m x 2m complex generator; columns generate over Z.
  static ComplexLattice from_complex(const CMat& Bc, std::string label = "");
  // Square Z[i]-generator B; the Z-basis is {B e_j, i B e_j}.
  static ComplexLattice from_gaussian(const CMat& B, std::string label = "");

  int dim() const { return static_cast<int>(B_.cols()); }
  int complex_dim() const;
  const RMat& basis() const { return B_; }
  CMat complex_basis() const;
  RMat gram() const { return B_.transpose() * B_; }
  double volume() const { return volume_; }
  const std::string& label() const { return label_; }

  ComplexLattice scaled(double c) const;
  // Left multiplication by an invertible real map.
  ComplexLattice transformed(const RMat& A, std::string label = "") const;
  // Dual under the pairing Re(y^H x), i.e. the real dual B^{-T}.
  ComplexLattice dual() const;

  RVec point(const IVec& coeffs) const { return B_ * coeffs.cast<double>(); }
  // Integer coefficients of a lattice point; throws if v is not within tol of the lattice.
  IVec coefficients(const RVec& v, double tol = 1e-6) const;
  bool contains(const RVec& v, double tol = 1e-6) const;

  // LLL-reduced basis Bred = B U with unimodular U, and the R factor of Bred.
  const detail::Reduction& reduction() const;

 private:
  ComplexLattice(RMat B, std::string label);
  RMat B_;
  double volume_ = 0;
  std::string label_;
  std::shared_ptr<detail::ReductionCache> red_;  // filled lazily, once
};

namespace detail {
struct Reduction {
  RMat basis;  // LLL-reduced
  IMat U;      // original -> reduced: basis = B * U
  RMat Q, R;   // basis = Q R, R upper triangular with positive diagonal
};
}  // namespace detail

// LLL reduction (delta = 0.99) of the columns of B; returns U with B U reduced.
IMat lll(RMat& B, double delta = 0.99);

// B1 and B2 generate the same lattice (B1^{-1} B2 integral and unimodular).
bool same_lattice(const RMat& B1, const RMat& B2, double tol = 1e-6);

struct VolumeVnr {
  double volume;
  double vnr;          // V^{2/N} / sigma^2, sigma^2 = noise variance per complex dimension
  double vnr_real;     // V^{2/N} / sigma_r^2 with sigma_r^2 = sigma^2 / 2
  double log_density;  // (2/N) log V, i.e. per complex dimension
};
VolumeVnr volume_vnr(const ComplexLattice& L, double sigma);

struct CvpResult {
  RVec point;
  IVec coeffs;  // in the lattice's own basis
  double dist2 = 0;
  long nodes = 0;
};

// Exact closest vector by Schnorr-Euchner enumeration on the reduced basis.
// Ties (equal distance up to 1e-9 relative) go to the lexicographically
// smallest coordinate vector in the reduced basis.
CvpResult cvp(const ComplexLattice& L, const RVec& y, long node_cap = kDefaultNodeCap);
CvpResult cvp(const ComplexLattice& L, const CVec& y, long node_cap = kDefaultNodeCap);

// Calls f(reduced coords, squared distance) for every lattice point v with
// |v - center|^2 <= r2. Returns the number of enumeration nodes visited.
long enumerate_ball(const ComplexLattice& L, const RVec& center, double r2,
                    const std::function<void(const IVec&, double)>& f, long node_cap = kDefaultNodeCap);

// Shortest nonzero vector (squared length).
double shortest_length2(const ComplexLattice& L, long node_cap = kDefaultNodeCap);

// Theta series sum_{v in L} exp(-pi tau |v|^2), truncated at the radius where
// Banaszczyk's tail bound drops below tol.
double theta(const ComplexLattice& L, double tau, double tol = 1e-12, long node_cap = kDefaultNodeCap);
// Theta - 1, summed over nonzero vectors only (keeps precision when tiny).
double theta_minus_one(const ComplexLattice& L, double tau, double tol = 1e-12, long node_cap = kDefaultNodeCap);

struct Flatness {
  double primal;  // V / (pi sigma^2)^{N/2} Theta_L(1/(pi sigma^2)) - 1
  double dual;    // Theta_{L*}(pi sigma^2) - 1
};
// Both expressions of the flatness factor; throws std::runtime_error if they
// disagree by more than 4 tol + 1e-12 (1 + |dual|).
Flatness flatness_both(const ComplexLattice& L, double sigma, double tol = 1e-11, long node_cap = kDefaultNodeCap);
double flatness(const ComplexLattice& L, double sigma, double tol = 1e-11, long node_cap = kDefaultNodeCap);

// Integer z drawn with probability proportional to exp(-(z - c)^2 / s^2).
std::int64_t sample_z(double c, double s, std::mt19937_64& rng);

// Klein / GPV sampler for D_{L, sigma, c}, density proportional to
// exp(-|v - c|^2 / sigma^2). Requires sigma >= eta * max |b_i*| unless the basis
// is orthogonal, in which case the sampler is exact.
class GaussianSampler {
 public:
  GaussianSampler(const ComplexLattice& L, double sigma, double eta = 3.0);
  RVec sample(const RVec& center, std::mt19937_64& rng) const;
  RVec sample(std::mt19937_64& rng) const;
  IVec sample_coeffs(const RVec& center, std::mt19937_64& rng) const;
  double sigma() const { return sigma_; }

 private:
  ComplexLattice L_;
  double sigma_;
  RMat Bs_;  // Gram-Schmidt vectors of the (unreduced) basis, columns
  RVec bs2_;
  RMat mu_;
};

RVec sample_dgauss(const ComplexLattice& L, double sigma, const RVec& center, std::mt19937_64& rng);

}  // namespace alc
