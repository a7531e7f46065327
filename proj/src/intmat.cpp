#include "alc/intmat.hpp"

#include <stdexcept>
#include <vector>

namespace alc {

namespace {
using i128 = __int128;

i128 mod(i128 a, i128 m) {
  a %= m;
  return a < 0 ? a + m : a;
}

// g = a s + b t
void ext_gcd(i128 a, i128 b, i128& g, i128& s, i128& t) {
  i128 r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    const i128 q = r0 / r1;
    i128 tmp = r0 - q * r1;
    r0 = r1, r1 = tmp;
    tmp = s0 - q * s1;
    s0 = s1, s1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1, t1 = tmp;
  }
  if (r0 < 0) r0 = -r0, s0 = -s0, t0 = -t0;
  g = r0, s = s0, t = t0;
}
}  // namespace

IMat hnf_mod(const IMat& G, std::int64_t D) {
  if (D <= 0) throw std::invalid_argument("hnf_mod: D must be positive");
  const int N = static_cast<int>(G.rows());
  std::vector<std::vector<i128>> rows;
  for (Eigen::Index c = 0; c < G.cols(); ++c) {
    std::vector<i128> r(N);
    for (int i = 0; i < N; ++i) r[i] = mod(G(i, c), D);
    rows.push_back(r);
  }
  std::vector<std::vector<i128>> out(N, std::vector<i128>(N, 0));
  for (int j = 0; j < N; ++j) {
    // Pivot starts as D e_j; fold in every remaining row's column-j entry.
    std::vector<i128> piv(N, 0);
    piv[j] = D;
    for (auto& r : rows) {
      if (r[j] == 0) continue;
      i128 g, s, t;
      ext_gcd(piv[j], r[j], g, s, t);
      const i128 a = piv[j] / g, b = r[j] / g;
      std::vector<i128> np(N), nr(N);
      for (int c = j; c < N; ++c) {
        np[c] = s * piv[c] + t * r[c];
        nr[c] = a * r[c] - b * piv[c];
      }
      for (int c = j + 1; c < N; ++c) {
        np[c] = mod(np[c], D);
        nr[c] = mod(nr[c], D);
      }
      piv = np;
      r = nr;
      r[j] = 0;
    }
    out[j] = piv;
  }
  for (int i = 0; i < N; ++i)
    for (int r = 0; r < i; ++r) {
      const i128 q = (out[r][i] - mod(out[r][i], out[i][i])) / out[i][i];
      if (q == 0) continue;
      for (int c = i; c < N; ++c) out[r][c] -= q * out[i][c];
    }
  IMat H(N, N);
  for (int i = 0; i < N; ++i)
    for (int c = 0; c < N; ++c) H(i, c) = static_cast<std::int64_t>(out[i][c]);
  return H;
}

}  // namespace alc
