#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Data-parallel inner loops behind the mask algebra and block matching.
//
// Every kernel has a scalar reference implementation; vector variants are
// compiled per-ISA and chosen once at startup from the host CPU. Setting the
// environment variable DOA_SIMD=scalar forces the reference path. All variants
// must produce bit-identical results (see tests/test_simd.cpp).
//
// Mask kernels assume bytes are 0 or 1.
namespace doa::simd {

enum class Isa { scalar, avx2, neon };

struct Kernels {
  Isa isa;
  std::size_t (*count_set)(const std::uint8_t* a, std::size_t n);
  std::size_t (*count_and)(const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
  std::size_t (*count_or)(const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
  void (*or_into)(std::uint8_t* dst, const std::uint8_t* src, std::size_t n);
  void (*and_into)(std::uint8_t* dst, const std::uint8_t* src, std::size_t n);
  // Sum of absolute differences of two 8-bit rows.
  std::uint32_t (*sad)(const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
};

const Kernels& active();

// Null when the variant was not compiled in or the host cannot run it.
const Kernels* for_isa(Isa isa);

std::string_view name(Isa isa);

namespace detail {
extern const Kernels kScalarKernels;
#if defined(DOA_HAVE_AVX2)
extern const Kernels kAvx2Kernels;
#endif
#if defined(DOA_HAVE_NEON)
extern const Kernels kNeonKernels;
#endif
}  // namespace detail

}  // namespace doa::simd
