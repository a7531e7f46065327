#include "alc/unit_equalizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "alc/lattice.hpp"

namespace alc {

RVec log_embed(const FieldElement& u) {
  const NumberField K = u.field();
  const Rational N = K.norm(u);
  if (!u.is_integral() || !(N == Rational(1) || N == Rational(-1))) throw std::invalid_argument("log_embed: not a unit");
  const auto s = K.embed(u);
  RVec v(static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) v(static_cast<Eigen::Index>(i)) = std::log(std::norm(s[i]));
  return v;
}

FieldElement LogLattice::unit(const std::vector<long>& e) const {
  if (e.size() != units.size()) throw std::invalid_argument("exponent vector length != unit rank");
  FieldElement u = field.one();
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e[i] != 0) u = u * units[i].pow(e[i]);
  return u;
}

namespace {

// Orthonormal coordinates for the lattice spanned by G (n x r): returns the
// r x r triangular basis and the n x r isometry Q.
void isometry(const RMat& G, RMat& Q, RMat& R) {
  Eigen::HouseholderQR<RMat> qr(G);
  const int r = static_cast<int>(G.cols());
  Q = qr.householderQ() * RMat::Identity(G.rows(), r);
  R = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
}

}  // namespace

double covering_radius(const RMat& G) {
  const int r = static_cast<int>(G.cols());
  if (r == 0) return 0;
  RMat Q, R;
  isometry(G, Q, R);
  const auto L = ComplexLattice::from_real(R);
  if (r == 1) return std::abs(R(0, 0)) / 2;
  const RMat& B = L.reduction().basis;
  // Candidate neighbours: small combinations of the reduced basis.
  std::vector<RVec> cand;
  std::vector<int> c(r, -2);
  while (true) {
    if (std::any_of(c.begin(), c.end(), [](int v) { return v != 0; })) {
      RVec v = RVec::Zero(r);
      for (int i = 0; i < r; ++i) v += c[i] * B.col(i);
      cand.push_back(v);
    }
    int i = 0;
    while (i < r && c[i] == 2) c[i++] = -2;
    if (i == r) break;
    ++c[i];
  }
  // Voronoi vertices are equidistant from 0 and r independent neighbours;
  // keep those with no closer lattice point.
  double best = 0;
  const int M = static_cast<int>(cand.size());
  std::vector<int> idx(r);
  auto visit = [&](auto&& self, int depth, int start) -> void {
    if (depth == r) {
      RMat A(r, r);
      RVec b(r);
      for (int j = 0; j < r; ++j) {
        A.row(j) = 2 * cand[idx[j]].transpose();
        b(j) = cand[idx[j]].squaredNorm();
      }
      Eigen::FullPivLU<RMat> lu(A);
      if (lu.rank() < r) return;
      const RVec x = lu.solve(b);
      const double d2 = x.squaredNorm();
      if (d2 <= best * best * (1 + 1e-12)) return;
      const auto cl = cvp(L, x);
      if (cl.dist2 < d2 * (1 - 1e-9)) return;
      best = std::sqrt(d2);
      return;
    }
    for (int i = start; i < M; ++i) {
      idx[depth] = i;
      self(self, depth + 1, i + 1);
    }
  };
  visit(visit, 0, 0);
  return best;
}

LogLattice build_log_lattice(const NumberField& K, int B) {
  LogLattice L;
  L.field = K;
  const int deg = K.degree();
  const int n = K.num_embeddings();
  const int r = K.totally_real() ? deg - 1 : deg / 2 - 1;  // unit rank
  // Embedding table of the integral basis, all conjugates, for a float norm filter.
  std::vector<std::vector<std::complex<double>>> conj, emb;
  for (const auto& w : K.integral_basis()) {
    conj.push_back(K.all_conjugates(w));
    emb.push_back(K.embed(w));
  }
  std::vector<FieldElement> found;
  std::vector<RVec> logs;
  std::vector<FieldElement> torsion;
  std::vector<std::int64_t> c(deg, -B);
  while (true) {
    double N = 1;
    for (int t = 0; t < deg; ++t) {
      std::complex<double> z = 0;
      for (int j = 0; j < deg; ++j) z += static_cast<double>(c[j]) * conj[j][t];
      N *= std::abs(z);
    }
    if (std::abs(N - 1) < 1e-6) {
      const auto x = K.element_int(c);
      const Rational ex = K.norm(x);
      if (ex == Rational(1) || ex == Rational(-1)) {
        const RVec v = log_embed(x);
        if (v.norm() < 1e-9) {
          torsion.push_back(x);
        } else {
          found.push_back(x);
          logs.push_back(v);
        }
      }
    }
    int i = deg - 1;
    while (i >= 0 && c[i] == B) c[i--] = -B;
    if (i < 0) break;
    ++c[i];
  }
  // Torsion generator: element of largest multiplicative order.
  L.torsion = K.integer(-1);
  L.torsion_order = 2;
  for (const auto& z : torsion) {
    FieldElement p = z;
    for (int k = 1; k <= 24; ++k) {
      if (p == K.one()) {
        if (k > L.torsion_order) {
          L.torsion = z;
          L.torsion_order = k;
        }
        break;
      }
      p = p * z;
    }
  }
  L.generators = RMat::Zero(n, r);
  if (r > 0) {
    // Successive minima of the log vectors found; they form a basis in rank <= 3
    // provided the box contains them, which the certification below checks.
    std::vector<int> order(logs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return logs[a].norm() < logs[b].norm() - 1e-12; });
    RMat chosen(n, 0);
    for (int i : order) {
      if (static_cast<int>(chosen.cols()) == r) break;
      RMat trial(n, chosen.cols() + 1);
      trial << chosen, logs[i];
      Eigen::FullPivLU<RMat> lu(trial);
      lu.setThreshold(1e-9);
      if (lu.rank() == trial.cols()) {
        chosen = trial;
        L.units.push_back(found[i]);
      }
    }
    if (static_cast<int>(chosen.cols()) < r) throw std::runtime_error("unit search: too few independent units found");
    L.generators = chosen;
    // Every unit seen must have integral exponents in this basis.
    const auto solver = chosen.colPivHouseholderQr();
    for (const auto& v : logs) {
      const RVec e = solver.solve(v);
      if ((e.array() - e.array().round()).abs().maxCoeff() > 1e-6)
        throw std::runtime_error("unit search: found units do not generate the unit group");
    }
    // Prefer units with positive first log coordinate for a stable orientation.
    for (int j = 0; j < r; ++j)
      if (L.generators(0, j) < 0) {
        L.generators.col(j) *= -1;
        L.units[j] = L.units[j].inverse();
      }
    L.regulator = std::abs(L.generators.topRows(r).determinant());
    L.covering_radius = covering_radius(L.generators);
    L.rho = r == 1 ? L.regulator / 2 : L.covering_radius;
  }
  return L;
}

UnitQuantization quantize_channel(const CVec& h, const LogLattice& L) {
  const int n = L.n();
  if (h.size() != n) throw std::invalid_argument("quantize_channel: channel size != number of embeddings");
  RVec t(n);
  for (int i = 0; i < n; ++i) t(i) = std::log(std::norm(h(i)));
  if (std::abs(t.sum()) > 1e-9 * std::max(1.0, t.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("quantize_channel: channel is not normalized (prod |h_i|^2 != 1)");
  const int r = L.rank();
  std::vector<long> best(r, 0);
  if (r > 0) {
    RMat Q, R;
    isometry(L.generators, Q, R);
    const auto lat = ComplexLattice::from_real(R);
    const RVec y = Q.transpose() * t;
    const auto cl = cvp(lat, y);
    // Tie scan over the neighbouring exponent vectors.
    double bd = 0;
    bool have = false;
    std::vector<int> off(r, -1);
    while (true) {
      std::vector<long> e(r);
      RVec v = RVec::Zero(n);
      for (int i = 0; i < r; ++i) {
        e[i] = static_cast<long>(cl.coeffs(i)) + off[i];
        v += static_cast<double>(e[i]) * L.generators.col(i);
      }
      const double d = (t - v).squaredNorm();
      const double tie = 1e-12 * std::max(1.0, bd);
      if (!have || d < bd - tie || (std::abs(d - bd) <= tie && e < best)) {
        bd = have ? std::min(bd, d) : d;
        have = true;
        best = e;
      }
      int i = 0;
      while (i < r && off[i] == 1) off[i++] = -1;
      if (i == r) break;
      ++off[i];
    }
  }
  UnitQuantization q;
  q.exponents = best;
  q.u = L.unit(best);
  const auto s = L.field.embed(q.u);
  q.U.resize(n);
  q.E.resize(n);
  for (int i = 0; i < n; ++i) {
    q.U(i) = s[i];
    q.E(i) = h(i) / s[i];
  }
  q.error_norm = q.E.norm();
  return q;
}

}  // namespace alc
