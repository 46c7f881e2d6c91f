#include <cstdlib>
#include <string_view>

#include "doa/simd.hpp"

namespace doa::simd {
namespace {

bool host_supports(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(DOA_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(DOA_HAVE_NEON)
      return true;  // mandatory on AArch64
#else
      return false;
#endif
  }
  return false;
}

const Kernels* table(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &detail::kScalarKernels;
    case Isa::avx2:
#if defined(DOA_HAVE_AVX2)
      return &detail::kAvx2Kernels;
#else
      return nullptr;
#endif
    case Isa::neon:
#if defined(DOA_HAVE_NEON)
      return &detail::kNeonKernels;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const Kernels& choose() {
  if (const char* forced = std::getenv("DOA_SIMD")) {
    if (std::string_view(forced) == "scalar") return detail::kScalarKernels;
  }
  for (Isa isa : {Isa::avx2, Isa::neon}) {
    if (const Kernels* k = for_isa(isa)) return *k;
  }
  return detail::kScalarKernels;
}

}  // namespace

const Kernels* for_isa(Isa isa) { return host_supports(isa) ? table(isa) : nullptr; }

const Kernels& active() {
  static const Kernels& chosen = choose();
  return chosen;
}

std::string_view name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

}  // namespace doa::simd
