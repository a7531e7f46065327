#include "alc/construction_a.hpp"

#include <cmath>
#include <stdexcept>

#include "alc/intmat.hpp"

namespace alc {

// ------------------------------------------------------------------- codes

LinearCode::LinearCode(GaloisField f, int T_, std::vector<Word> generator)
    : field(std::move(f)), T(T_), k(static_cast<int>(generator.size())), G(std::move(generator)) {
  for (const auto& row : G)
    if (static_cast<int>(row.size()) != T) throw std::invalid_argument("code generator row length != T");
  if (k > T) throw std::invalid_argument("code dimension exceeds length");
  if (rank(field, G) != k) throw std::invalid_argument("code generator is rank deficient");
}

std::vector<Word> LinearCode::parity_check() const {
  if (k == 0) {
    std::vector<Word> H(T, Word(T, field.zero()));
    for (int t = 0; t < T; ++t) H[t][t] = field.one();
    return H;
  }
  return nullspace(field, G, T);
}

bool LinearCode::contains(const Word& w) const {
  if (static_cast<int>(w.size()) != T) return false;
  auto rows = G;
  rows.push_back(w);
  return rank(field, rows) == k;
}

Word LinearCode::encode(const Word& msg) const {
  if (static_cast<int>(msg.size()) != k) throw std::invalid_argument("message length != k");
  Word w(T, field.zero());
  for (int i = 0; i < k; ++i)
    for (int t = 0; t < T; ++t) w[t] = field.add(w[t], field.mul(msg[i], G[i][t]));
  return w;
}

std::uint64_t LinearCode::size() const {
  std::uint64_t s = 1;
  for (int i = 0; i < k; ++i) {
    if (s > UINT64_MAX / field.order()) throw std::overflow_error("code size overflows");
    s *= field.order();
  }
  return s;
}

Word LinearCode::message(std::uint64_t index) const {
  Word m(k);
  for (int i = 0; i < k; ++i) {
    m[i] = field.element(index % field.order());
    index /= field.order();
  }
  return m;
}

LinearCode full_code(const GaloisField& f, int T) {
  std::vector<Word> G(T, Word(T, f.zero()));
  for (int t = 0; t < T; ++t) G[t][t] = f.one();
  return LinearCode(f, T, G);
}

LinearCode zero_code(const GaloisField& f, int T) { return LinearCode(f, T, {}); }

LinearCode random_code(std::uint32_t p, int l, int T, int k, std::mt19937_64& rng) {
  if (k < 0 || k > T) throw std::invalid_argument("random_code: need 0 <= k <= T");
  const GaloisField f(p, l);
  std::uniform_int_distribution<std::uint64_t> pick(0, f.order() - 1);
  while (true) {
    std::vector<Word> G(k, Word(T));
    for (auto& row : G)
      for (auto& x : row) x = f.element(pick(rng));
    if (rank(f, G) == k) return LinearCode(f, T, G);
  }
}

// ------------------------------------------------------------- Reed-Solomon

ReedSolomon::ReedSolomon(std::uint32_t p, int T, int k) {
  const GaloisField f(p, 1);
  if (T > static_cast<int>(p)) throw std::invalid_argument("Reed-Solomon length exceeds field size");
  std::vector<Word> G(k, Word(T));
  for (int i = 0; i < k; ++i)
    for (int t = 0; t < T; ++t) G[i][t] = f.pow(f.from_int(t), i);
  if (k > 0)
    for (int t = 0; t < T; ++t) G[0][t] = f.one();  // 0^0 = 1
  code_ = LinearCode(f, T, G);
}

namespace {
using Poly = std::vector<Fq>;  // coefficients, low degree first

// Exact division; returns nullopt if there is a remainder.
std::optional<Poly> poly_div(const GaloisField& f, Poly num, const Poly& den) {
  int dn = static_cast<int>(den.size()) - 1;
  while (dn >= 0 && den[dn].is_zero()) --dn;
  if (dn < 0) return std::nullopt;
  const Fq inv_lead = f.inv(den[dn]);
  int nn = static_cast<int>(num.size()) - 1;
  if (nn < dn) {
    for (const auto& c : num)
      if (!c.is_zero()) return std::nullopt;
    return Poly{};
  }
  Poly q(nn - dn + 1, f.zero());
  for (int i = nn; i >= dn; --i) {
    const Fq c = f.mul(num[i], inv_lead);
    q[i - dn] = c;
    for (int j = 0; j <= dn; ++j) num[i - dn + j] = f.sub(num[i - dn + j], f.mul(c, den[j]));
  }
  for (int i = 0; i < dn; ++i)
    if (!num[i].is_zero()) return std::nullopt;
  return q;
}
}  // namespace

std::optional<Word> ReedSolomon::decode(const Word& r) const {
  const GaloisField& f = code_.field;
  const int T = code_.T, k = code_.k, e = max_errors();
  if (static_cast<int>(r.size()) != T) throw std::invalid_argument("received word length != T");
  if (k == 0) return Word{};
  // Unknowns: Q_0..Q_{e+k-1}, E_0..E_{e-1}; E is monic of degree e.
  const int nq = e + k, nv = nq + e;
  std::vector<Word> rows(T, Word(nv + 1, f.zero()));
  for (int t = 0; t < T; ++t) {
    const Fq a = f.from_int(t);
    Fq pw = f.one();
    for (int j = 0; j < nq; ++j) {
      rows[t][j] = pw;
      pw = f.mul(pw, a);
    }
    pw = f.one();
    for (int j = 0; j < e; ++j) {
      rows[t][nq + j] = f.neg(f.mul(r[t], pw));
      pw = f.mul(pw, a);
    }
    rows[t][nv] = f.mul(r[t], pw);  // r_t a^e
  }
  const auto piv = rref(f, rows);
  if (!piv.empty() && piv.back() == nv) return std::nullopt;  // inconsistent
  std::vector<Fq> sol(nv, f.zero());
  for (std::size_t i = 0; i < piv.size(); ++i) sol[piv[i]] = rows[i][nv];
  Poly Q(sol.begin(), sol.begin() + nq);
  Poly E(sol.begin() + nq, sol.end());
  E.push_back(f.one());
  const auto P = poly_div(f, Q, E);
  if (!P) return std::nullopt;
  Word msg(k, f.zero());
  for (int i = 0; i < k && i < static_cast<int>(P->size()); ++i) msg[i] = (*P)[i];
  for (int i = k; i < static_cast<int>(P->size()); ++i)
    if (!(*P)[i].is_zero()) return std::nullopt;
  const Word c = code_.encode(msg);
  int dist = 0;
  for (int t = 0; t < T; ++t) dist += c[t] != r[t];
  if (dist > e) return std::nullopt;
  return msg;
}

// ------------------------------------------------------------ embeddings

RMat block_embedding(const NumberField& K, int T) {
  const int deg = K.degree();
  const int m = K.num_embeddings();
  const auto& basis = K.integral_basis();
  std::vector<std::vector<std::complex<double>>> s;
  for (const auto& w : basis) s.push_back(K.embed(w));
  RMat E = RMat::Zero(deg * T, deg * T);
  if (K.totally_real()) {
    for (int t = 0; t < T; ++t)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < deg; ++j) E(t * m + i, t * deg + j) = s[j][i].real();
  } else {
    for (int t = 0; t < T; ++t)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < deg; ++j) {
          E(t * m + i, t * deg + j) = s[j][i].real();
          E(m * T + t * m + i, t * deg + j) = s[j][i].imag();
        }
  }
  return E;
}

// --------------------------------------------------------- Construction A

namespace {

FieldElement block_element(const NumberField& K, const IVec& x, int t) {
  std::vector<std::int64_t> c(K.degree());
  for (int j = 0; j < K.degree(); ++j) c[j] = x(t * K.degree() + j);
  return K.element_int(c);
}

// Builds int_basis from the residue map: x is in the lattice iff H r(x) = 0.
void assemble(ConstructionALattice& L) {
  const int N = static_cast<int>(L.embedding.cols());
  const GaloisField& F = L.code.field;
  const auto H = L.code.parity_check();
  const int l = F.l();
  const std::uint32_t p = F.p();
  // Column c of the F_p constraint matrix is H r(e_c), split into components.
  std::vector<Word> cons(H.size() * l, Word(N));
  for (int c = 0; c < N; ++c) {
    IVec e = IVec::Zero(N);
    e(c) = 1;
    const Word r = L.residues(e);
    for (std::size_t i = 0; i < H.size(); ++i) {
      Fq acc = F.zero();
      for (int t = 0; t < L.code.T; ++t) acc = F.add(acc, F.mul(H[i][t], r[t]));
      cons[i * l][c] = {acc.a, 0};
      if (l == 2) cons[i * l + 1][c] = {acc.b, 0};
    }
  }
  const GaloisField Fp(p, 1);
  auto work = cons;
  const auto pivots = rref(Fp, work);
  const auto ns = nullspace(Fp, cons, N);
  L.int_basis = IMat::Zero(N, N);
  int col = 0;
  for (const auto& v : ns) {
    for (int i = 0; i < N; ++i) L.int_basis(i, col) = v[i].a;
    ++col;
  }
  for (int c : pivots) L.int_basis(c, col++) = p;
  L.lattice = ComplexLattice::from_real(L.alpha * L.embedding * L.int_basis.cast<double>());
}

}  // namespace

double ConstructionALattice::formula_volume() const {
  const double r2 = field.complex_places();
  const double p = split.p;
  const double l = split.l;
  const double D = std::abs(static_cast<double>(field.discriminant()));
  if (variant == Variant::Compound)
    return std::exp(T * (-r2 * std::log(2.0) + 0.5 * std::log(D)) + l * (T - code.k) * std::log(p));
  const double n = field.num_embeddings();
  return std::exp(-r2 * std::log(2.0) + (n - code.k) * std::log(p) + 0.5 * std::log(D));
}

Word ConstructionALattice::residues(const IVec& x) const {
  Word r;
  if (variant == Variant::Compound) {
    for (int t = 0; t < T; ++t) r.push_back(split.reduce(block_element(field, x, t)));
  } else {
    const auto el = block_element(field, x, 0);
    for (const auto& [sa, sb] : field.embedding_signs()) r.push_back(split.reduce(field.automorphism(el, sa, sb)));
  }
  return r;
}

bool ConstructionALattice::contains_int(const IVec& x) const { return code.contains(residues(x)); }

RVec ConstructionALattice::embed(const IVec& x) const { return alpha * embedding * x.cast<double>(); }

CMat ConstructionALattice::matrix_form(const RVec& v) const {
  if (field.totally_real()) throw std::logic_error("matrix form needs a complex field");
  const int m = field.num_embeddings();
  const CVec c = complexify(v);
  CMat M(m, T);
  for (int t = 0; t < T; ++t)
    for (int i = 0; i < m; ++i) M(i, t) = c(t * m + i);
  return M;
}

ConstructionALattice lift_compound(const NumberField& K, const PrimeSplit& split, const LinearCode& code,
                                   double alpha) {
  if (!(split.field == K)) throw std::invalid_argument("prime split belongs to another field");
  if (!(code.field == split.residue_field)) throw std::invalid_argument("code alphabet does not match residue field");
  if (!(alpha > 0)) throw std::invalid_argument("scaling must be positive");
  ConstructionALattice L;
  L.field = K;
  L.split = split;
  L.code = code;
  L.variant = Variant::Compound;
  L.alpha = alpha;
  L.T = code.T;
  L.embedding = block_embedding(K, code.T);
  assemble(L);
  return L;
}

ConstructionALattice lift_ergodic(const NumberField& K, const PrimeSplit& split, const LinearCode& code,
                                  double alpha) {
  if (!(split.field == K)) throw std::invalid_argument("prime split belongs to another field");
  if (split.l != 1) throw std::invalid_argument("ergodic construction needs a degree-one prime");
  if (code.T != K.num_embeddings()) throw std::invalid_argument("code length must equal the number of embeddings");
  if (!(code.field == split.residue_field)) throw std::invalid_argument("code alphabet does not match residue field");
  ConstructionALattice L;
  L.field = K;
  L.split = split;
  L.code = code;
  L.variant = Variant::Ergodic;
  L.alpha = alpha;
  L.T = 1;
  L.embedding = block_embedding(K, 1);
  assemble(L);
  return L;
}

IMat mult_matrix(const FieldElement& x) {
  const NumberField K = x.field();
  const int n = K.degree();
  IMat M(n, n);
  const auto& basis = K.integral_basis();
  for (int j = 0; j < n; ++j) {
    const auto c = (x * basis[j]).int_coords();
    for (int i = 0; i < n; ++i) M(i, j) = c[i];
  }
  return M;
}

namespace {
void require_unit(const FieldElement& u) {
  if (!u.is_integral() || std::abs(u.field().norm(u).num()) != 1 || !u.field().norm(u).is_integer())
    throw std::invalid_argument("element is not a unit");
}
}  // namespace

ConstructionALattice unit_twist(const ConstructionALattice& L, const FieldElement& u) {
  if (L.variant != Variant::Ergodic) throw std::invalid_argument("unit_twist applies to the ergodic variant");
  require_unit(u);
  const NumberField& K = L.field;
  const auto& F = L.code.field;
  std::vector<Fq> scale;
  for (const auto& [sa, sb] : K.embedding_signs()) scale.push_back(L.split.reduce(K.automorphism(u, sa, sb)));
  std::vector<Word> G = L.code.G;
  for (auto& row : G)
    for (int t = 0; t < L.code.T; ++t) row[t] = F.mul(row[t], scale[t]);
  const LinearCode C2(F, L.code.T, G);
  ConstructionALattice out = lift_ergodic(K, L.split, C2, L.alpha);
  // Check: multiplying L by u gives exactly the twisted lattice.
  const IMat Mu = mult_matrix(u);
  const RMat twisted = L.alpha * L.embedding * (Mu * L.int_basis).cast<double>();
  if (!same_lattice(twisted, out.lattice.basis()) || C2.k != L.code.k)
    throw std::logic_error("unit twist did not reproduce the twisted lattice");
  return out;
}

IMat hermite_form(const ConstructionALattice& L) { return hnf_mod(L.int_basis, L.split.p); }

IMat hermite_form_times_unit(const ConstructionALattice& L, const FieldElement& u) {
  require_unit(u);
  const int n = L.field.degree();
  const IMat Mu = mult_matrix(u);
  IMat blk = IMat::Zero(n * L.T, n * L.T);
  for (int t = 0; t < L.T; ++t) blk.block(t * n, t * n, n, n) = Mu;
  // Reduce mod p first to keep entries small; p Z^N is in both lattices.
  IMat G = blk * L.int_basis;
  return hnf_mod(G, L.split.p);
}

}  // namespace alc
