#include <arm_neon.h>

#include "doa/simd.hpp"

namespace doa::simd::detail {
namespace {

// vpaddlq chains widen u8 -> u16 -> u32 -> u64 so a 16-byte block never
// saturates.
inline std::uint64_t widen_sum(uint8x16_t v) {
  return vaddvq_u64(vpaddlq_u32(vpaddlq_u16(vpaddlq_u8(v))));
}

std::size_t count_set(const std::uint8_t* a, std::size_t n) {
  std::size_t total = 0, i = 0;
  for (; i + 16 <= n; i += 16) total += widen_sum(vld1q_u8(a + i));
  for (; i < n; ++i) total += a[i];
  return total;
}

std::size_t count_and(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::size_t total = 0, i = 0;
  for (; i + 16 <= n; i += 16) total += widen_sum(vandq_u8(vld1q_u8(a + i), vld1q_u8(b + i)));
  for (; i < n; ++i) total += a[i] & b[i];
  return total;
}

std::size_t count_or(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::size_t total = 0, i = 0;
  for (; i + 16 <= n; i += 16) total += widen_sum(vorrq_u8(vld1q_u8(a + i), vld1q_u8(b + i)));
  for (; i < n; ++i) total += a[i] | b[i];
  return total;
}

void or_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) vst1q_u8(dst + i, vorrq_u8(vld1q_u8(dst + i), vld1q_u8(src + i)));
  for (; i < n; ++i) dst[i] |= src[i];
}

void and_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) vst1q_u8(dst + i, vandq_u8(vld1q_u8(dst + i), vld1q_u8(src + i)));
  for (; i < n; ++i) dst[i] &= src[i];
}

std::uint32_t sad(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::uint64_t total = 0;
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) total += widen_sum(vabdq_u8(vld1q_u8(a + i), vld1q_u8(b + i)));
  for (; i < n; ++i) total += a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
  return static_cast<std::uint32_t>(total);
}

}  // namespace

const Kernels kNeonKernels{Isa::neon, count_set, count_and, count_or, or_into, and_into, sad};

}  // namespace doa::simd::detail
