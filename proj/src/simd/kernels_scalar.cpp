#include "doa/simd.hpp"

namespace doa::simd::detail {
namespace {

std::size_t count_set(const std::uint8_t* a, std::size_t n) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += a[i];
  return total;
}

std::size_t count_and(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += a[i] & b[i];
  return total;
}

std::size_t count_or(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += a[i] | b[i];
  return total;
}

void or_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] |= src[i];
}

void and_into(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] &= src[i];
}

std::uint32_t sad(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::uint32_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total += a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
  }
  return total;
}

}  // namespace

const Kernels kScalarKernels{Isa::scalar, count_set, count_and, count_or,
                             or_into,     and_into,  sad};

}  // namespace doa::simd::detail
