#include "alc/kernels.hpp"

#include <cstdlib>
#include <stdexcept>

namespace alc {

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const Kernels& kernels_for(Isa isa) {
  if (!isa_available(isa)) throw std::runtime_error("ISA not available: " + isa_name(isa));
  switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::Avx2:
      return detail::kAvx2Kernels;
#endif
#if defined(__aarch64__)
    case Isa::Neon:
      return detail::kNeonKernels;
#endif
    default:
      return detail::kScalarKernels;
  }
}

namespace {
const Kernels& select() {
  if (const char* env = std::getenv("ALC_ISA")) {
    const std::string s(env);
    if (s == "scalar") return kernels_for(Isa::Scalar);
    if (s == "avx2") return kernels_for(Isa::Avx2);
    if (s == "neon") return kernels_for(Isa::Neon);
  }
  if (isa_available(Isa::Avx2)) return kernels_for(Isa::Avx2);
  if (isa_available(Isa::Neon)) return kernels_for(Isa::Neon);
  return kernels_for(Isa::Scalar);
}
}  // namespace

const Kernels& kernels() {
  static const Kernels& k = select();
  return k;
}

std::string isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
  }
  return "?";
}

}  // namespace alc
