#include "alc/mimo_codec.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace alc {

namespace {

bool is_diagonal(const CMat& A) {
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      if (i != j && std::abs(A(i, j)) > 1e-12 * scale) return false;
  return true;
}

}  // namespace

MmseFilter mmse_matrices(const CMat& H, double rho) {
  if (!(rho > 0)) throw std::invalid_argument("mmse_matrices: rho must be positive");
  const auto n = H.rows(), m = H.cols();
  MmseFilter f;
  f.H = H;
  f.rho = rho;
  if (!std::isfinite(rho)) {
    // Zero-forcing limit: H = Q R. A diagonal H is kept as its own factor so
    // that the filter does not rotate the noise.
    if (n < m) throw std::invalid_argument("mmse_matrices: fewer receive than transmit dimensions");
    if (n == m && is_diagonal(H)) {
      f.R = H;
      f.F = CMat::Identity(m, m);
    } else {
      Eigen::HouseholderQR<CMat> qr(H);
      f.R = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
      const CMat Q = qr.householderQ() * CMat::Identity(n, m);
      f.F = Q.adjoint();
    }
    if (f.R.diagonal().cwiseAbs().minCoeff() == 0) throw std::invalid_argument("mmse_matrices: H is singular");
    return f;
  }
  const CMat A = H.adjoint() * H + CMat::Identity(m, m) / rho;
  Eigen::LLT<CMat> llt(A);
  if (llt.info() != Eigen::Success) throw std::invalid_argument("mmse_matrices: factorization failed");
  f.R = llt.matrixU();
  // F^H R = H  <=>  R^H F = H^H
  f.F = llt.matrixL().solve(CMat(H.adjoint()));
  return f;
}

double covariance_residual(const MmseFilter& f, double sigma_s, double sigma_w) {
  const auto m = f.R.rows();
  const CMat G = f.F * f.H - f.R;
  CMat M = sigma_w * sigma_w * (f.F * f.F.adjoint() - CMat::Identity(m, m));
  if (std::isfinite(f.rho)) M += sigma_s * sigma_s * G * G.adjoint();
  return M.cwiseAbs().maxCoeff();
}

CMat block_diag(const CMat& A, int T) {
  CMat B = CMat::Zero(A.rows() * T, A.cols() * T);
  for (int t = 0; t < T; ++t) B.block(t * A.rows(), t * A.cols(), A.rows(), A.cols()) = A;
  return B;
}

namespace {

int blocks_of(const ComplexLattice& L, Eigen::Index m) {
  const int cd = L.complex_dim();
  if (cd % m) throw std::invalid_argument("lattice dimension is not a multiple of the channel width");
  return static_cast<int>(cd / m);
}

}  // namespace

Decoded map_decode(const CVec& y, const ComplexLattice& L, const MmseFilter& f, long node_cap) {
  const int T = blocks_of(L, f.R.rows());
  if (y.size() != f.H.rows() * T) throw std::invalid_argument("map_decode: received vector has the wrong size");
  const ComplexLattice RL = L.transformed(realify_map(block_diag(f.R, T)));
  const auto c = cvp(RL, realify(block_diag(f.F, T) * y), node_cap);
  return {L.point(c.coeffs), c.coeffs, c.nodes};
}

double map_objective(const CVec& y, const CMat& H, const RVec& x, double sigma_s, double sigma_w) {
  const CVec xc = complexify(x);
  const int T = static_cast<int>(xc.size() / H.cols());
  return (y - block_diag(H, T) * xc).squaredNorm() / (sigma_w * sigma_w) + xc.squaredNorm() / (sigma_s * sigma_s);
}

DecoupledParams decoupled_params(const MmseFilter& f, const LogLattice& L) {
  if (!is_diagonal(f.R)) throw std::invalid_argument("decoupled decoding needs a diagonal channel");
  const auto m = f.R.rows();
  DecoupledParams p;
  if (std::isfinite(f.rho)) {
    const CMat A = CMat::Identity(m, m) + f.rho * f.H.adjoint() * f.H;
    const double C = std::log(A.determinant().real());
    p.D = std::sqrt(f.rho) * std::exp(-C / (2.0 * m));
  } else {
    double s = 0;
    for (Eigen::Index i = 0; i < m; ++i) s += std::log(std::abs(f.R(i, i)));
    p.D = std::exp(-s / m);
  }
  CVec h(m);
  for (Eigen::Index i = 0; i < m; ++i) h(i) = p.D * f.R(i, i);
  p.q = quantize_channel(h, L);
  p.alpha = p.q.E.cwiseInverse().norm();
  return p;
}

CVec decoupled_target(const CVec& y, const MmseFilter& f, const DecoupledParams& p) {
  const auto n = f.H.rows(), m = f.H.cols();
  const int T = static_cast<int>(y.size() / n);
  CVec z(m * T);
  for (int t = 0; t < T; ++t) z.segment(t * m, m) = f.F * y.segment(t * n, n);
  for (int t = 0; t < T; ++t)
    for (Eigen::Index i = 0; i < m; ++i) z(t * m + i) *= p.D / p.q.E(i);
  return z;
}

RVec apply_diagonal(const RVec& x, const CVec& s) {
  CVec c = complexify(x);
  for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= s(k % s.size());
  return realify(c);
}

Decoded decoupled_decode(const CVec& y, const ComplexLattice& L, const MmseFilter& f, const DecoupledParams& p,
                         const LatticeDecoder& inner, long node_cap) {
  const RVec target = realify(decoupled_target(y, f, p));
  Decoded d;
  RVec xt;
  if (inner) {
    xt = inner(target);
  } else {
    const auto c = cvp(L, target, node_cap);
    xt = c.point;
    d.nodes = c.nodes;
  }
  d.point = apply_diagonal(xt, p.q.U.cwiseInverse());
  d.coeffs = L.coefficients(d.point);
  return d;
}

Decoded zero_forcing_decode(const CVec& y, const ComplexLattice& L, const CMat& H, const LatticeDecoder& inner,
                            long node_cap) {
  if (H.rows() != H.cols()) throw std::invalid_argument("zero forcing needs a square channel");
  const int T = blocks_of(L, H.cols());
  const RVec target = realify(block_diag(H.inverse(), T) * y);
  Decoded d;
  if (inner) {
    d.point = inner(target);
    d.coeffs = L.coefficients(d.point);
  } else {
    const auto c = cvp(L, target, node_cap);
    d.point = c.point;
    d.coeffs = c.coeffs;
    d.nodes = c.nodes;
  }
  return d;
}

IVec multiply_blocks(const IVec& x, const FieldElement& u) {
  const IMat M = mult_matrix(u);
  const auto n = M.rows();
  if (x.size() % n) throw std::invalid_argument("multiply_blocks: size is not a multiple of the degree");
  IVec out(x.size());
  for (Eigen::Index t = 0; t < x.size() / n; ++t) out.segment(t * n, n) = M * x.segment(t * n, n);
  return out;
}

MultistageDecoder::MultistageDecoder(const ConstructionALattice& L, const ReedSolomon& rs)
    : L_(&L),
      rs_(&rs),
      ok_(ComplexLattice::from_real(RMat::Identity(1, 1))),
      ideal_(ComplexLattice::from_real(RMat::Identity(1, 1))) {
  if (L.variant != Variant::Compound) throw std::invalid_argument("multistage decoding needs the compound variant");
  if (L.field.totally_real()) throw std::invalid_argument("multistage decoding needs a totally complex field");
  if (L.split.l != 1) throw std::invalid_argument("multistage decoding needs a degree-one prime");
  const LinearCode& c = rs.code();
  if (!(c.field == L.code.field) || c.T != L.code.T || c.k != L.code.k || c.G != L.code.G)
    throw std::invalid_argument("lattice was not built from this Reed-Solomon code");
  embed1_ = L.alpha * block_embedding(L.field, 1);
  ok_ = ComplexLattice::from_real(embed1_, "O_K");
  const auto P = lift_compound(L.field, L.split, zero_code(L.code.field, 1), L.alpha);
  ideal_ = P.lattice;
  ideal_basis_ = P.int_basis;
  const int deg = L.field.degree();
  for (std::uint32_t r = 0; r < L.split.p; ++r) {
    const auto e = L.split.lift(L.code.field.from_int(r));
    const auto ic = e.int_coords();
    IVec v(deg);
    for (int j = 0; j < deg; ++j) v(j) = ic[j];
    coset_reps_.push_back(v);
  }
}

RVec MultistageDecoder::block(const RVec& v, int t) const {
  const int m = L_->field.num_embeddings();
  const int T = L_->T;
  RVec b(2 * m);
  for (int i = 0; i < m; ++i) {
    b(i) = v(t * m + i);
    b(m + i) = v(m * T + t * m + i);
  }
  return b;
}

std::optional<IVec> MultistageDecoder::decode(const RVec& target) const {
  const int T = L_->T;
  const int deg = L_->field.degree();
  std::vector<RVec> blocks;
  Word received(T);
  for (int t = 0; t < T; ++t) {
    blocks.push_back(block(target, t));
    const auto c = cvp(ok_, blocks.back());
    std::vector<std::int64_t> ic(c.coeffs.data(), c.coeffs.data() + deg);
    received[t] = L_->split.reduce(L_->field.element_int(ic));
  }
  const auto msg = rs_->decode(received);
  if (!msg) return std::nullopt;
  const Word cw = rs_->code().encode(*msg);
  IVec x(deg * T);
  for (int t = 0; t < T; ++t) {
    const IVec& rep = coset_reps_[cw[t].a];
    const auto c = cvp(ideal_, RVec(blocks[t] - embed1_ * rep.cast<double>()));
    x.segment(t * deg, deg) = ideal_basis_ * c.coeffs + rep;
  }
  return x;
}

double lattice_rate(int m, int T, double sigma_s, double volume) {
  return m * std::log(std::numbers::pi * std::numbers::e * sigma_s * sigma_s) - std::log(volume) / T;
}

double gap_general(int m, double rho) { return std::log(static_cast<double>(m)) + 2 * rho; }
double gap_tight(double rho) { return std::log(2 * std::cosh(rho)); }
double gap_from_alpha(double alpha) { return 2 * std::log(alpha); }

GapBound gap_bound(const LogLattice& L) {
  GapBound g;
  g.source = L.field.name();
  g.m = L.n();
  g.rho = L.rho;
  g.general = gap_general(g.m, g.rho);
  g.tight = (g.m == 2 && L.rank() == 1) ? gap_tight(g.rho) : std::numeric_limits<double>::quiet_NaN();
  g.gap = std::isnan(g.tight) ? g.general : g.tight;
  g.alpha = std::exp(g.gap / 2);
  return g;
}

namespace {

// Log-regulator of the unit root of x^4 - x + 1: |log |theta|^2| over one
// conjugate pair (the pairs multiply to the constant term 1).
double quartic_min_regulator() {
  Eigen::Matrix4d C = Eigen::Matrix4d::Zero();
  // companion matrix of x^4 + 0 x^3 + 0 x^2 - x + 1
  C(1, 0) = C(2, 1) = C(3, 2) = 1;
  C(0, 3) = -1;
  C(1, 3) = 1;
  const Eigen::Vector4cd r = Eigen::EigenSolver<Eigen::Matrix4d>(C).eigenvalues();
  for (int i = 0; i < 4; ++i)
    if (r(i).imag() > 0) return std::abs(std::log(std::norm(r(i))));
  throw std::logic_error("x^4 - x + 1 has no complex root?");
}

}  // namespace

GapBound gap_bound(const std::string& name) {
  GapBound g;
  g.source = name;
  g.m = 2;
  if (name == "quartic-min") {
    g.rho = quartic_min_regulator() / 2;
    g.general = gap_general(2, g.rho);
    g.tight = gap_tight(g.rho);
    g.gap = g.tight;
    g.alpha = std::exp(g.gap / 2);
    g.note = "field x^4 - x + 1 (discriminant 229), unit group generated by a root";
  } else if (name == "mimo-2x2") {
    g.rho = g.general = g.tight = std::numeric_limits<double>::quiet_NaN();
    g.alpha = std::exp(0.74892);
    g.gap = gap_from_alpha(g.alpha);
    g.note = "catalogued error-norm bound for the 2x2 golden-code unit equalizer";
  } else {
    throw std::invalid_argument("unknown gap catalog entry: " + name);
  }
  return g;
}

std::vector<std::string> gap_catalog() { return {"quartic-min", "mimo-2x2"}; }

}  // namespace alc
