// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include "doa/simd.hpp"

namespace doa::simd::detail {
namespace {

inline std::uint64_t hsum_epi64(__m256i v) {
  const __m128i lo = _mm256_castsi256_si128(v);
  const __m128i hi = _mm256_extracti128_si256(v, 1);
  const __m128i s = _mm_add_epi64(lo, hi);
  return static_cast<std::uint64_t>(_mm_cvtsi128_si64(s)) +
         static_cast<std::uint64_t>(_mm_extract_epi64(s, 1));
}

inline __m256i load(const std::uint8_t* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

// _mm256_sad_epu8 against zero sums bytes into four 64-bit lanes.
std::size_t count_set(const std::uint8_t* a, std::size_t n) {
  const __m256i zero = _mm256_setzero_si256();
  __m256i acc = zero;
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) acc = _mm256_add_epi64(acc, _mm256_sad_epu8(load(a + i), zero));
  std::size_t total = hsum_epi64(acc);
  for (; i < n; ++i) total += a[i];
  return total;
}

std::size_t count_and(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  const __m256i zero = _mm256_setzero_si256();
  __m256i acc = zero;
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(_mm256_and_si256(load(a + i), load(b + i)), zero));
  }
  std::size_t total = hsum_epi64(acc);
  for (; i < n; ++i) total += a[i] & b[i];
  return total;
}

std::size_t count_or(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  const __m256i zero = _mm256_setzero_si256();
  __m256i acc = zero;
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(_mm256_or_si256(load(a + i), load(b + i)), zero));
  }
  std::size_t total = hsum_epi64(acc);
  for (; i < n; ++i) total += a[i] | b[i];
  return total;
}

void or_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i),
                        _mm256_or_si256(load(dst + i), load(src + i)));
  }
  for (; i < n; ++i) dst[i] |= src[i];
}

void and_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i),
                        _mm256_and_si256(load(dst + i), load(src + i)));
  }
  for (; i < n; ++i) dst[i] &= src[i];
}

std::uint32_t sad(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) acc = _mm256_add_epi64(acc, _mm256_sad_epu8(load(a + i), load(b + i)));
  std::uint64_t total = hsum_epi64(acc);
  if (i + 16 <= n) {
    const __m128i s = _mm_sad_epu8(_mm_loadu_si128(reinterpret_cast<const __m128i*>(a + i)),
                                   _mm_loadu_si128(reinterpret_cast<const __m128i*>(b + i)));
    total += static_cast<std::uint64_t>(_mm_cvtsi128_si64(s)) +
             static_cast<std::uint64_t>(_mm_extract_epi64(s, 1));
    i += 16;
  }
  for (; i < n; ++i) total += a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
  return static_cast<std::uint32_t>(total);
}

}  // namespace

const Kernels kAvx2Kernels{Isa::avx2, count_set, count_and, count_or, or_into, and_into, sad};

}  // namespace doa::simd::detail
