#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "alc/galois.hpp"
#include "alc/rational.hpp"

namespace alc {

enum class FieldKind { RealQuadratic, ComplexQuadratic, Biquadratic };

namespace detail {
struct FieldData;
}

class NumberField;

// Exact element stored by its coordinates over the field's integral basis.
class FieldElement {
 public:
  FieldElement() = default;

  const std::vector<Rational>& coords() const { return c_; }
  NumberField field() const;
  bool same_field(const FieldElement& o) const { return f_ == o.f_; }
  bool is_integral() const;
  bool is_zero() const;

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator*(const Rational& s) const;
  FieldElement inverse() const;
  FieldElement pow(long e) const;
  friend bool operator==(const FieldElement& a, const FieldElement& b) { return a.f_ == b.f_ && a.c_ == b.c_; }
  friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

  // Integer coordinates; throws if the element is not integral.
  std::vector<std::int64_t> int_coords() const;
  std::string str() const;

 private:
  friend class NumberField;
  FieldElement(std::shared_ptr<const detail::FieldData> f, std::vector<Rational> c)
      : f_(std::move(f)), c_(std::move(c)) {}
  std::shared_ptr<const detail::FieldData> f_;
  std::vector<Rational> c_;
};

// Q(sqrt d), or the bi-quadratic field Q(sqrt c, sqrt d) with c > 0. Power
// basis {1, sqrt c, sqrt d, sqrt c * sqrt d}; the quadratic case uses {1, sqrt d}.
class NumberField {
 public:
  static NumberField quadratic(std::int64_t d);
  static NumberField biquadratic(std::int64_t c, std::int64_t d);
  // Accepts "Q(sqrt13)", "Q(sqrt-3)", "Q(i)", "Q(i,sqrt5)", "Q(sqrt2,sqrt5)".
  static NumberField by_name(const std::string& name);

  const std::string& name() const;
  FieldKind kind() const;
  int degree() const;
  // Number of embedding components used by the canonical embedding: one per
  // conjugate pair for totally complex fields, one per real embedding otherwise.
  int num_embeddings() const;
  bool totally_real() const;
  int complex_places() const;
  std::int64_t generator_c() const;
  std::int64_t generator_d() const;  // 0 for quadratic fields
  std::int64_t discriminant() const;

  // Sign choices (on sqrt c, sqrt d) defining sigma_1..sigma_n.
  const std::vector<std::pair<int, int>>& embedding_signs() const;

  FieldElement element(const std::vector<Rational>& integral_coords) const;
  FieldElement element_int(const std::vector<std::int64_t>& integral_coords) const;
  FieldElement from_power_basis(const std::vector<Rational>& power_coords) const;
  std::vector<Rational> power_coords(const FieldElement& x) const;
  FieldElement zero() const;
  FieldElement one() const;
  FieldElement integer(std::int64_t v) const;
  const std::vector<FieldElement>& integral_basis() const;

  // Field automorphism sqrt c -> sa*sqrt c, sqrt d -> sb*sqrt d.
  FieldElement automorphism(const FieldElement& x, int sa, int sb) const;
  std::vector<std::complex<double>> embed(const FieldElement& x) const;
  // Every complex embedding, conjugates included (degree entries).
  std::vector<std::complex<double>> all_conjugates(const FieldElement& x) const;
  Rational norm(const FieldElement& x) const;
  Rational trace(const FieldElement& x) const;

  friend bool operator==(const NumberField& a, const NumberField& b) { return a.d_ == b.d_; }
  const std::shared_ptr<const detail::FieldData>& data() const { return d_; }

 private:
  friend class FieldElement;
  explicit NumberField(std::shared_ptr<const detail::FieldData> d) : d_(std::move(d)) {}
  std::shared_ptr<const detail::FieldData> d_;
};

enum class ArithOp { Add, Mul, Inv };

// Dispatches the three exact operations; b is ignored for Inv.
FieldElement elem_arith(const FieldElement& a, const FieldElement& b, ArithOp op);
std::vector<std::complex<double>> embed(const FieldElement& x);
std::pair<Rational, Rational> norm_trace(const FieldElement& x);

class NotSplit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A prime ideal P above p together with an explicit isomorphism O_K/P -> F_{p^l},
// stored as the images of the integral basis.
struct PrimeSplit {
  NumberField field = NumberField::quadratic(-1);
  std::uint32_t p = 0;
  int l = 1;
  FieldElement generator;
  GaloisField residue_field;
  std::vector<Fq> basis_images;
  bool splits_completely = false;

  Fq reduce(const FieldElement& x) const;
  // Canonical preimage: lexicographically smallest coordinates in [0, p).
  FieldElement lift(Fq c) const;
  // Images of all Galois-conjugate homomorphisms are not needed; this one map
  // defines the ideal.
  bool in_ideal(const FieldElement& x) const { return reduce(x).is_zero(); }
};

// Finds a prime above p with a principal generator found by bounded search
// over small integral elements (smallest T2 norm first).
PrimeSplit split_prime(const NumberField& field, std::uint32_t p);
// The prime ideal generated by g, which must have norm +-p^l for the residue
// degree l of p.
PrimeSplit split_at(const NumberField& field, const FieldElement& g);

enum class ReduceDir { Reduce, Lift };
Fq reduce(const FieldElement& x, const PrimeSplit& split);
FieldElement lift(Fq c, const PrimeSplit& split);

}  // namespace alc
