#include "alc/linalg.hpp"

namespace alc {

RVec realify(const CVec& x) {
  const Eigen::Index m = x.size();
  RVec r(2 * m);
  r.head(m) = x.real();
  r.tail(m) = x.imag();
  return r;
}

CVec complexify(const RVec& x) {
  if (x.size() % 2) throw std::invalid_argument("complexify: odd real dimension");
  const Eigen::Index m = x.size() / 2;
  CVec c(m);
  for (Eigen::Index i = 0; i < m; ++i) c(i) = cdouble(x(i), x(m + i));
  return c;
}

RMat realify_map(const CMat& A) {
  const Eigen::Index r = A.rows(), c = A.cols();
  RMat M(2 * r, 2 * c);
  M.topLeftCorner(r, c) = A.real();
  M.topRightCorner(r, c) = -A.imag();
  M.bottomLeftCorner(r, c) = A.imag();
  M.bottomRightCorner(r, c) = A.real();
  return M;
}

}  // namespace alc
