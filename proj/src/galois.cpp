#include "alc/galois.hpp"

#include <algorithm>

namespace alc {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint32_t powmod(std::uint64_t b, std::uint64_t e, std::uint32_t p) {
  std::uint64_t r = 1 % p;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

std::uint32_t invmod(std::uint32_t a, std::uint32_t p) {
  if (a % p == 0) throw std::domain_error("inverse of zero in F_p");
  return powmod(a, p - 2, p);
}

GaloisField::GaloisField(std::uint32_t p, int l) : p_(p), l_(l) {
  if (!is_prime(p)) throw std::invalid_argument("GaloisField: p must be prime");
  if (l != 1 && l != 2) throw std::invalid_argument("GaloisField: only l = 1, 2 supported");
  if (l == 2 && p != 2) {
    for (std::uint32_t r = 2; r < p; ++r) {
      if (powmod(r, (p - 1) / 2, p) == p - 1) {
        nr_ = r;
        break;
      }
    }
  }
}

Fq GaloisField::from_int(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  return {static_cast<std::uint32_t>(r), 0};
}

Fq GaloisField::gen() const {
  if (l_ != 2) throw std::logic_error("GaloisField::gen on prime field");
  return {0, 1};
}

Fq GaloisField::mul(Fq x, Fq y) const {
  if (l_ == 1) return {mulp(x.a, y.a), 0};
  const std::uint32_t bb = mulp(x.b, y.b);
  if (p_ == 2) {
    // t^2 = t + 1
    return {addp(mulp(x.a, y.a), bb), addp(addp(mulp(x.a, y.b), mulp(x.b, y.a)), bb)};
  }
  return {addp(mulp(x.a, y.a), mulp(bb, nr_)), addp(mulp(x.a, y.b), mulp(x.b, y.a))};
}

Fq GaloisField::pow(Fq x, std::uint64_t e) const {
  Fq r = one();
  while (e) {
    if (e & 1) r = mul(r, x);
    x = mul(x, x);
    e >>= 1;
  }
  return r;
}

Fq GaloisField::inv(Fq x) const {
  if (x.is_zero()) throw std::domain_error("inverse of zero in F_q");
  return pow(x, order() - 2);
}

std::string GaloisField::str(Fq x) const {
  if (l_ == 1) return std::to_string(x.a);
  return std::to_string(x.a) + "+" + std::to_string(x.b) + "t";
}

std::vector<int> rref(const GaloisField& f, std::vector<std::vector<Fq>>& rows) {
  std::vector<int> pivots;
  if (rows.empty()) return pivots;
  const int ncols = static_cast<int>(rows[0].size());
  int r = 0;
  for (int c = 0; c < ncols && r < static_cast<int>(rows.size()); ++c) {
    int piv = -1;
    for (int i = r; i < static_cast<int>(rows.size()); ++i)
      if (!rows[i][c].is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(rows[r], rows[piv]);
    const Fq s = f.inv(rows[r][c]);
    for (auto& v : rows[r]) v = f.mul(v, s);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
      if (i == r || rows[i][c].is_zero()) continue;
      const Fq m = rows[i][c];
      for (int j = 0; j < ncols; ++j) rows[i][j] = f.sub(rows[i][j], f.mul(m, rows[r][j]));
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

int rank(const GaloisField& f, std::vector<std::vector<Fq>> rows) {
  return static_cast<int>(rref(f, rows).size());
}

std::vector<std::vector<Fq>> nullspace(const GaloisField& f, std::vector<std::vector<Fq>> rows, int ncols) {
  const auto pivots = rref(f, rows);
  std::vector<char> is_pivot(ncols, 0);
  for (int c : pivots) is_pivot[c] = 1;
  std::vector<std::vector<Fq>> basis;
  for (int free = 0; free < ncols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Fq> v(ncols, f.zero());
    v[free] = f.one();
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = f.neg(rows[r][free]);
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace alc
