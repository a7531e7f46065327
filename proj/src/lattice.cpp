#include "alc/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <vector>

#include "alc/kernels.hpp"

namespace alc {

namespace detail {
struct ReductionCache {
  std::once_flag once;
  Reduction red;
};
}  // namespace detail

// ------------------------------------------------------------------ lattice

ComplexLattice::ComplexLattice(RMat B, std::string label)
    : B_(std::move(B)), label_(std::move(label)), red_(std::make_shared<detail::ReductionCache>()) {
  if (B_.rows() != B_.cols() || B_.rows() == 0) throw std::invalid_argument("lattice generator must be square");
  Eigen::FullPivLU<RMat> lu(B_);
  if (lu.rank() < B_.cols()) throw std::invalid_argument("lattice generator is rank deficient");
  volume_ = std::abs(lu.determinant());
}

ComplexLattice ComplexLattice::from_real(const RMat& B, std::string label) { return ComplexLattice(B, std::move(label)); }

ComplexLattice ComplexLattice::from_complex(const CMat& Bc, std::string label) {
  if (Bc.cols() != 2 * Bc.rows()) throw std::invalid_argument("complex generator must be m x 2m");
  RMat B(2 * Bc.rows(), Bc.cols());
  B.topRows(Bc.rows()) = Bc.real();
  B.bottomRows(Bc.rows()) = Bc.imag();
  return ComplexLattice(B, std::move(label));
}

ComplexLattice ComplexLattice::from_gaussian(const CMat& B, std::string label) {
  if (B.rows() != B.cols()) throw std::invalid_argument("Z[i]-generator must be square");
  return ComplexLattice(realify_map(B), std::move(label));
}

int ComplexLattice::complex_dim() const {
  if (dim() % 2) throw std::logic_error("odd real dimension has no complex view");
  return dim() / 2;
}

CMat ComplexLattice::complex_basis() const {
  const int m = complex_dim();
  CMat Bc(m, dim());
  Bc.real() = B_.topRows(m);
  Bc.imag() = B_.bottomRows(m);
  return Bc;
}

ComplexLattice ComplexLattice::scaled(double c) const { return ComplexLattice(B_ * c, label_); }

ComplexLattice ComplexLattice::transformed(const RMat& A, std::string label) const {
  return ComplexLattice(A * B_, std::move(label));
}

ComplexLattice ComplexLattice::dual() const {
  return ComplexLattice(B_.inverse().transpose(), label_.empty() ? "" : label_ + "*");
}

IVec ComplexLattice::coefficients(const RVec& v, double tol) const {
  const RVec x = B_.partialPivLu().solve(v);
  IVec z(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double r = std::round(x(i));
    if (std::abs(x(i) - r) > tol) throw std::invalid_argument("vector is not a lattice point");
    z(i) = static_cast<std::int64_t>(r);
  }
  return z;
}

bool ComplexLattice::contains(const RVec& v, double tol) const {
  const RVec x = B_.partialPivLu().solve(v);
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (std::abs(x(i) - std::round(x(i))) > tol) return false;
  return true;
}

const detail::Reduction& ComplexLattice::reduction() const {
  std::call_once(red_->once, [this] {
    auto& r = red_->red;
    r.basis = B_;
    r.U = lll(r.basis);
    Eigen::HouseholderQR<RMat> qr(r.basis);
    const int n = dim();
    r.Q = qr.householderQ() * RMat::Identity(n, n);
    r.R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i)
      if (r.R(i, i) < 0) {
        r.R.row(i) *= -1;
        r.Q.col(i) *= -1;
      }
  });
  return red_->red;
}

// ---------------------------------------------------------------------- LLL

IMat lll(RMat& B, double delta) {
  const int n = static_cast<int>(B.cols());
  IMat U = IMat::Identity(n, n);
  RMat Bs(B.rows(), n);
  RMat mu = RMat::Zero(n, n);
  RVec bb(n);
  auto gs_row = [&](int k) {
    Bs.col(k) = B.col(k);
    for (int j = 0; j < k; ++j) {
      mu(k, j) = B.col(k).dot(Bs.col(j)) / bb(j);
      Bs.col(k) -= mu(k, j) * Bs.col(j);
    }
    bb(k) = Bs.col(k).squaredNorm();
  };
  gs_row(0);
  int k = 1;
  long iter = 0;
  const long max_iter = 1000L * n * n + 100000;
  while (k < n) {
    if (++iter > max_iter) throw std::runtime_error("LLL failed to converge");
    gs_row(k);
    for (int j = k - 1; j >= 0; --j) {
      const double q = std::round(mu(k, j));
      if (q == 0) continue;
      B.col(k) -= q * B.col(j);
      U.col(k) -= static_cast<std::int64_t>(q) * U.col(j);
      for (int t = 0; t < j; ++t) mu(k, t) -= q * mu(j, t);
      mu(k, j) -= q;
    }
    if (bb(k) < (delta - mu(k, k - 1) * mu(k, k - 1)) * bb(k - 1)) {
      B.col(k).swap(B.col(k - 1));
      U.col(k).swap(U.col(k - 1));
      k = std::max(k - 1, 1);
      if (k == 1) gs_row(0);
    } else {
      ++k;
    }
  }
  return U;
}

bool same_lattice(const RMat& B1, const RMat& B2, double tol) {
  if (B1.rows() != B2.rows() || B1.cols() != B2.cols()) return false;
  const RMat X = B1.partialPivLu().solve(B2);
  for (Eigen::Index i = 0; i < X.size(); ++i)
    if (std::abs(X(i) - std::round(X(i))) > tol) return false;
  return std::abs(std::abs(X.array().round().matrix().determinant()) - 1.0) < 0.5;
}

VolumeVnr volume_vnr(const ComplexLattice& L, double sigma) {
  if (!(sigma > 0)) throw std::invalid_argument("sigma must be positive");
  const double N = L.dim();
  const double logV = std::log(L.volume());
  const double v2 = std::exp(2.0 * logV / N);
  return {L.volume(), v2 / (sigma * sigma), 2.0 * v2 / (sigma * sigma), 2.0 * logV / N};
}

// -------------------------------------------------------------- enumeration

namespace {

// Schnorr-Euchner depth-first enumeration in the coordinates of R.
class Enumerator {
 public:
  Enumerator(const RMat& R, const RVec& yq, long cap) : R_(R), yq_(yq), n_(static_cast<int>(R.rows())), cap_(cap) {
    z_.assign(n_, 0);
  }

  // Visit every leaf with distance <= bound(); the bound may shrink as leaves
  // are reported.
  template <class Leaf, class Bound>
  void run(Leaf&& leaf, Bound&& bound) {
    rec(n_ - 1, 0.0, leaf, bound);
  }
  long nodes() const { return nodes_; }
  const std::vector<std::int64_t>& z() const { return z_; }

 private:
  template <class Leaf, class Bound>
  void rec(int k, double partial, Leaf& leaf, Bound& bound) {
    double c = yq_(k);
    for (int j = k + 1; j < n_; ++j) c -= R_(k, j) * static_cast<double>(z_[j]);
    const double rkk = R_(k, k);
    c /= rkk;
    const double r2 = rkk * rkk;
    const auto z0 = static_cast<std::int64_t>(std::llround(c));
    std::int64_t up = z0, down = z0 - 1;
    bool up_ok = true, down_ok = true;
    while (up_ok || down_ok) {
      // Next candidate: the closer of the two frontier points.
      bool take_up;
      if (up_ok && down_ok) take_up = std::abs(static_cast<double>(up) - c) <= std::abs(static_cast<double>(down) - c);
      else take_up = up_ok;
      const std::int64_t zk = take_up ? up : down;
      const double diff = static_cast<double>(zk) - c;
      const double d = partial + r2 * diff * diff;
      if (++nodes_ > cap_) throw BudgetExceeded("enumeration node cap exceeded");
      if (d > bound()) {
        if (take_up) up_ok = false;
        else down_ok = false;
        continue;
      }
      z_[k] = zk;
      if (k == 0) leaf(d);
      else rec(k - 1, d, leaf, bound);
      if (take_up) ++up;
      else --down;
    }
    z_[k] = 0;
  }

  const RMat& R_;
  RVec yq_;
  int n_;
  long cap_;
  long nodes_ = 0;
  std::vector<std::int64_t> z_;
};

}  // namespace

CvpResult cvp(const ComplexLattice& L, const RVec& y, long node_cap) {
  if (y.size() != L.dim()) throw std::invalid_argument("cvp: dimension mismatch");
  const auto& red = L.reduction();
  const RVec yq = red.Q.transpose() * y;
  Enumerator e(red.R, yq, node_cap);
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::int64_t> best_z;
  auto slack = [&] { return std::isfinite(best) ? best + 1e-9 * std::max(best, 1e-12) : best; };
  e.run(
      [&](double d) {
        const auto& z = e.z();
        if (best_z.empty() || d < best - 1e-9 * std::max(best, 1e-12)) {
          best = d;
          best_z = z;
        } else if (z < best_z) {
          best = std::min(best, d);
          best_z = z;
        }
      },
      slack);
  IVec zr(L.dim());
  for (int i = 0; i < L.dim(); ++i) zr(i) = best_z[i];
  CvpResult out;
  out.coeffs = red.U * zr;
  out.point = red.basis * zr.cast<double>();
  out.dist2 = (out.point - y).squaredNorm();
  out.nodes = e.nodes();
  return out;
}

CvpResult cvp(const ComplexLattice& L, const CVec& y, long node_cap) { return cvp(L, realify(y), node_cap); }

long enumerate_ball(const ComplexLattice& L, const RVec& center, double r2,
                    const std::function<void(const IVec&, double)>& f, long node_cap) {
  const auto& red = L.reduction();
  const RVec yq = red.Q.transpose() * center;
  Enumerator e(red.R, yq, node_cap);
  IVec z(L.dim());
  e.run(
      [&](double d) {
        for (int i = 0; i < L.dim(); ++i) z(i) = e.z()[i];
        f(z, d);
      },
      [r2] { return r2; });
  return e.nodes();
}

double shortest_length2(const ComplexLattice& L, long node_cap) {
  const auto& red = L.reduction();
  double best = red.basis.colwise().squaredNorm().minCoeff();
  const RVec zero = RVec::Zero(L.dim());
  Enumerator e(red.R, zero, node_cap);
  e.run(
      [&](double d) {
        const auto& z = e.z();
        if (std::any_of(z.begin(), z.end(), [](std::int64_t v) { return v != 0; }) && d < best) best = d;
      },
      [&] { return best * (1 + 1e-12); });
  return best;
}

// -------------------------------------------------------------------- theta

namespace {
double theta_impl(const ComplexLattice& L, double tau, double tol, long node_cap, bool skip_zero) {
  if (!(tau > 0) || !(tol > 0)) throw std::invalid_argument("theta: tau and tol must be positive");
  const int N = L.dim();
  const Kernels& k = kernels();
  // Banaszczyk: rho(L' \ c sqrt(N) B) <= beta(c) rho(L') with L' = sqrt(tau) L and
  // beta(c) = (c sqrt(2 pi e) exp(-pi c^2))^N, valid for c >= 1/sqrt(2 pi).
  auto beta = [N](double c) {
    return std::exp(N * (std::log(c) + 0.5 * std::log(2 * M_PI * M_E) - M_PI * c * c));
  };
  // Rough head estimate: Theta ~ 1 + 1/(V tau^{N/2}).
  double head_guess = 1.0 + 1.0 / (L.volume() * std::pow(tau, 0.5 * N));
  double c = 1.0;
  while (beta(c) / (1 - beta(c)) * head_guess * 4 > tol) c += 0.05;
  std::vector<double> buf;
  buf.reserve(4096);
  for (int attempt = 0; attempt < 40; ++attempt) {
    const double r2 = c * c * N / tau;
    double head = 0;
    buf.clear();
    enumerate_ball(
        L, RVec::Zero(N), r2,
        [&](const IVec& z, double d) {
          if (skip_zero && z.isZero()) return;
          buf.push_back(d);
          if (buf.size() == 4096) {
            head += k.sum_exp(buf.data(), buf.size(), -M_PI * tau);
            buf.clear();
          }
        },
        node_cap);
    head += k.sum_exp(buf.data(), buf.size(), -M_PI * tau);
    const double b = beta(c);
    // The bound is relative to the full sum, zero vector included.
    const double full = skip_zero ? head + 1.0 : head;
    if (b / (1 - b) * full < tol) return head;
    head_guess = full;
    while (beta(c) / (1 - beta(c)) * head_guess * 2 > tol) c += 0.05;
  }
  throw BudgetExceeded("theta: tolerance not reached");
}
}  // namespace

double theta(const ComplexLattice& L, double tau, double tol, long node_cap) {
  return theta_impl(L, tau, tol, node_cap, false);
}

double theta_minus_one(const ComplexLattice& L, double tau, double tol, long node_cap) {
  return theta_impl(L, tau, tol, node_cap, true);
}

Flatness flatness_both(const ComplexLattice& L, double sigma, double tol, long node_cap) {
  if (!(sigma > 0)) throw std::invalid_argument("flatness: sigma must be positive");
  const int N = L.dim();
  const double s2 = sigma * sigma;
  const double pref = std::exp(std::log(L.volume()) - 0.5 * N * std::log(M_PI * s2));
  Flatness f{};
  f.primal = pref * theta(L, 1.0 / (M_PI * s2), tol / pref, node_cap) - 1.0;
  f.dual = theta_minus_one(L.dual(), M_PI * s2, tol, node_cap);
  if (std::abs(f.primal - f.dual) > 4 * tol + 1e-12 * (1 + std::abs(f.dual)))
    throw std::runtime_error("flatness: primal and dual expressions disagree");
  return f;
}

double flatness(const ComplexLattice& L, double sigma, double tol, long node_cap) {
  return flatness_both(L, sigma, tol, node_cap).dual;
}

// ------------------------------------------------------------------ sampler

std::int64_t sample_z(double c, double s, std::mt19937_64& rng) {
  if (!(s > 0)) throw std::invalid_argument("sample_z: width must be positive");
  const auto lo = static_cast<std::int64_t>(std::floor(c - 12 * s));
  const auto hi = static_cast<std::int64_t>(std::ceil(c + 12 * s));
  std::uniform_int_distribution<std::int64_t> pick(lo, hi);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (true) {
    const std::int64_t z = pick(rng);
    const double d = (static_cast<double>(z) - c) / s;
    if (u(rng) < std::exp(-d * d)) return z;
  }
}

GaussianSampler::GaussianSampler(const ComplexLattice& L, double sigma, double eta) : L_(L), sigma_(sigma) {
  if (!(sigma > 0)) throw std::invalid_argument("sampler: sigma must be positive");
  const RMat& B = L_.reduction().basis;
  const int n = L_.dim();
  Bs_ = B;
  mu_ = RMat::Identity(n, n);
  bs2_.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      mu_(i, j) = B.col(i).dot(Bs_.col(j)) / bs2_(j);
      Bs_.col(i) -= mu_(i, j) * Bs_.col(j);
    }
    bs2_(i) = Bs_.col(i).squaredNorm();
  }
  const RMat G = B.transpose() * B;
  const double off = (G - RMat(G.diagonal().asDiagonal())).cwiseAbs().maxCoeff();
  const bool orthogonal = off <= 1e-12 * G.diagonal().maxCoeff();
  const double max_bs = std::sqrt(bs2_.maxCoeff());
  if (!orthogonal && sigma < eta * max_bs)
    throw std::invalid_argument("sampler: sigma below validity threshold eta * max |b_i*|");
}

IVec GaussianSampler::sample_coeffs(const RVec& center, std::mt19937_64& rng) const {
  const auto& red = L_.reduction();
  const int n = L_.dim();
  RVec t = center;
  IVec z(n);
  for (int i = n - 1; i >= 0; --i) {
    const double ci = t.dot(Bs_.col(i)) / bs2_(i);
    z(i) = sample_z(ci, sigma_ / std::sqrt(bs2_(i)), rng);
    t -= static_cast<double>(z(i)) * red.basis.col(i);
  }
  return red.U * z;
}

RVec GaussianSampler::sample(const RVec& center, std::mt19937_64& rng) const {
  return L_.point(sample_coeffs(center, rng));
}

RVec GaussianSampler::sample(std::mt19937_64& rng) const { return sample(RVec::Zero(L_.dim()), rng); }

RVec sample_dgauss(const ComplexLattice& L, double sigma, const RVec& center, std::mt19937_64& rng) {
  return GaussianSampler(L, sigma).sample(center, rng);
}

}  // namespace alc
