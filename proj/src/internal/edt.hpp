#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace doa::detail {

struct EdtScratch {
  std::vector<int> v;
  std::vector<double> z;
};

void edt_1d(const double* f, std::size_t stride, int n, double* d, std::size_t d_stride,
            EdtScratch& scratch);

// Squared distance from every pixel to the nearest nonzero seed.
std::vector<double> squared_edt(std::span<const std::uint8_t> seeds, int width, int height);

}  // namespace doa::detail
