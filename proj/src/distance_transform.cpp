// Exact squared Euclidean distance transform: two separable passes of the
// lower-envelope-of-parabolas algorithm (Felzenszwalb & Huttenlocher).
//
// All arithmetic is on integer-valued doubles well below 2^53, so sums are
// exact. Breakpoints are ratios of small integers, and distinct ratios differ
// by far more than one ulp, so envelope ordering is exact too.
#include <cmath>
#include <limits>

#include "doa/mask.hpp"
#include "internal/edt.hpp"

namespace doa {
namespace detail {

void edt_1d(const double* f, std::size_t stride, int n, double* d, std::size_t d_stride,
            EdtScratch& s) {
  s.v.resize(static_cast<std::size_t>(n));
  s.z.resize(static_cast<std::size_t>(n) + 1);
  auto fv = [&](int q) { return f[static_cast<std::size_t>(q) * stride]; };

  int k = 0;
  s.v[0] = 0;
  s.z[0] = -std::numeric_limits<double>::infinity();
  s.z[1] = std::numeric_limits<double>::infinity();
  for (int q = 1; q < n; ++q) {
    const double fq = fv(q) + static_cast<double>(q) * q;
    double x;
    for (;;) {
      const int v = s.v[static_cast<std::size_t>(k)];
      x = (fq - (fv(v) + static_cast<double>(v) * v)) / (2.0 * q - 2.0 * v);
      if (x > s.z[static_cast<std::size_t>(k)]) break;
      --k;
    }
    ++k;
    s.v[static_cast<std::size_t>(k)] = q;
    s.z[static_cast<std::size_t>(k)] = x;
    s.z[static_cast<std::size_t>(k) + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (s.z[static_cast<std::size_t>(k) + 1] < q) ++k;
    const int v = s.v[static_cast<std::size_t>(k)];
    const double dq = static_cast<double>(q - v);
    d[static_cast<std::size_t>(q) * d_stride] = dq * dq + fv(v);
  }
}

std::vector<double> squared_edt(std::span<const std::uint8_t> seeds, int width, int height) {
  // Any real squared distance is below w^2 + h^2; seeds-free rows carry this
  // finite stand-in for infinity through the passes and are mapped back.
  const double far = 4.0 * (static_cast<double>(width) * width + static_cast<double>(height) * height) + 1.0;
  const std::size_t w = static_cast<std::size_t>(width);
  std::vector<double> f(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) f[i] = seeds[i] ? 0.0 : far;

  std::vector<double> tmp(seeds.size());
  EdtScratch scratch;
  // Columns first, then rows.
  for (std::size_t x = 0; x < w; ++x) edt_1d(f.data() + x, w, height, tmp.data() + x, w, scratch);
  for (int y = 0; y < height; ++y) {
    const std::size_t off = static_cast<std::size_t>(y) * w;
    edt_1d(tmp.data() + off, 1, width, f.data() + off, 1, scratch);
  }
  for (double& v : f) {
    if (v >= far) v = std::numeric_limits<double>::infinity();
  }
  return f;
}

}  // namespace detail

std::vector<double> squared_distance_transform(const BinaryMask& pos) {
  return detail::squared_edt(pos.bits(), pos.width(), pos.height());
}

DistanceMap distance_transform(const BinaryMask& pos) {
  DistanceMap out{pos.width(), pos.height(), squared_distance_transform(pos)};
  for (double& v : out.values) v = std::sqrt(v);
  return out;
}

}  // namespace doa
