#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace alc {

// Element a + b*t of F_{p^l}; for l = 1 the b part is always zero.
struct Fq {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  friend bool operator==(const Fq& x, const Fq& y) { return x.a == y.a && x.b == y.b; }
  friend bool operator!=(const Fq& x, const Fq& y) { return !(x == y); }
  bool is_zero() const { return a == 0 && b == 0; }
};

// F_p (l = 1) or F_{p^2} = F_p[t]/(t^2 - r) with r a fixed non-residue
// (t^2 = t + 1 when p = 2).
class GaloisField {
 public:
  GaloisField() = default;
  GaloisField(std::uint32_t p, int l);

  std::uint32_t p() const { return p_; }
  int l() const { return l_; }
  std::uint64_t order() const { return l_ == 1 ? p_ : static_cast<std::uint64_t>(p_) * p_; }
  std::uint32_t nonresidue() const { return nr_; }

  Fq zero() const { return {}; }
  Fq one() const { return {1, 0}; }
  Fq from_int(std::int64_t v) const;
  Fq gen() const;  // t, the adjoined root (only for l = 2)

  Fq add(Fq x, Fq y) const { return {addp(x.a, y.a), addp(x.b, y.b)}; }
  Fq sub(Fq x, Fq y) const { return {subp(x.a, y.a), subp(x.b, y.b)}; }
  Fq neg(Fq x) const { return {subp(0, x.a), subp(0, x.b)}; }
  Fq mul(Fq x, Fq y) const;
  Fq inv(Fq x) const;
  Fq pow(Fq x, std::uint64_t e) const;

  // Dense indexing a + p*b, used to enumerate the field.
  std::uint64_t index(Fq x) const { return x.a + static_cast<std::uint64_t>(p_) * x.b; }
  Fq element(std::uint64_t idx) const {
    return {static_cast<std::uint32_t>(idx % p_), static_cast<std::uint32_t>(idx / p_)};
  }
  bool in_prime_field(Fq x) const { return x.b == 0; }
  std::string str(Fq x) const;

  friend bool operator==(const GaloisField& f, const GaloisField& g) { return f.p_ == g.p_ && f.l_ == g.l_; }

 private:
  std::uint32_t addp(std::uint32_t x, std::uint32_t y) const {
    const std::uint64_t s = static_cast<std::uint64_t>(x) + y;
    return static_cast<std::uint32_t>(s >= p_ ? s - p_ : s);
  }
  std::uint32_t subp(std::uint32_t x, std::uint32_t y) const { return x >= y ? x - y : x + p_ - y; }
  std::uint32_t mulp(std::uint32_t x, std::uint32_t y) const {
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(x) * y % p_);
  }

  std::uint32_t p_ = 2;
  int l_ = 1;
  std::uint32_t nr_ = 0;
};

bool is_prime(std::uint64_t n);
std::uint32_t powmod(std::uint64_t b, std::uint64_t e, std::uint32_t p);
std::uint32_t invmod(std::uint32_t a, std::uint32_t p);

// Row-reduced echelon form over F_q in place; returns the pivot columns.
std::vector<int> rref(const GaloisField& f, std::vector<std::vector<Fq>>& rows);
int rank(const GaloisField& f, std::vector<std::vector<Fq>> rows);
// Basis of {x : M x = 0} for a matrix given by rows.
std::vector<std::vector<Fq>> nullspace(const GaloisField& f, std::vector<std::vector<Fq>> rows, int ncols);

}  // namespace alc
