#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>

namespace alc {

using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using IMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IVec = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using cdouble = std::complex<double>;

// Real equivalent of a complex vector: [Re x; Im x].
RVec realify(const CVec& x);
CVec complexify(const RVec& x);
// Real equivalent of a complex linear map acting on realified vectors.
RMat realify_map(const CMat& A);

}  // namespace alc
