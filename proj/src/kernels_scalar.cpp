#include <cmath>

#include "alc/kernels.hpp"

namespace alc::detail {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sqdist(const double* a, const double* b, std::size_t n) {
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double sum_exp(const double* x, std::size_t n, double scale) {
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += std::exp(scale * x[i]);
  return s;
}

}  // namespace

const Kernels kScalarKernels{Isa::Scalar, dot, sqdist, axpy, sum_exp};

}  // namespace alc::detail
