#pragma once

#include <cstddef>
#include <string>

namespace alc {

enum class Isa { Scalar, Avx2, Neon };

// Hot inner loops used by enumeration, theta sums and sampling. Every ISA
// variant must agree with the scalar one up to floating-point reassociation.
struct Kernels {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sqdist)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // sum_i exp(scale * x_i); terms with scale*x_i < -745 contribute zero.
  double (*sum_exp)(const double* x, std::size_t n, double scale);
};

bool isa_available(Isa isa);
const Kernels& kernels_for(Isa isa);  // throws if the ISA is unavailable
// Best available ISA, overridable with ALC_ISA=scalar|avx2|neon.
const Kernels& kernels();
std::string isa_name(Isa isa);

namespace detail {
extern const Kernels kScalarKernels;
#if defined(__x86_64__) || defined(_M_X64)
extern const Kernels kAvx2Kernels;
#endif
#if defined(__aarch64__)
extern const Kernels kNeonKernels;
#endif
}  // namespace detail

}  // namespace alc
