#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doa/mask.hpp"
#include "internal/edt.hpp"

namespace doa {

// Both operators reduce to thresholding an exact squared distance transform:
// a pixel survives erosion iff its nearest background pixel lies outside the
// disk, and is set by dilation iff some foreground pixel lies inside it.

BinaryMask erode(const BinaryMask& m, int radius) {
  if (radius < 0) throw std::invalid_argument("erode: radius must be >= 0");
  if (radius == 0) return m;

  // Pad by one background pixel so the frame border acts as background.
  const int pw = m.width() + 2, ph = m.height() + 2;
  std::vector<std::uint8_t> background(static_cast<std::size_t>(pw) * ph, 1);
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      background[static_cast<std::size_t>(y + 1) * pw + (x + 1)] = m.at(x, y) ? 0 : 1;
    }
  }
  const auto sq = detail::squared_edt(background, pw, ph);
  const double r2 = static_cast<double>(radius) * radius;
  BinaryMask out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (sq[static_cast<std::size_t>(y + 1) * pw + (x + 1)] > r2) out.set(x, y);
    }
  }
  return out;
}

BinaryMask dilate(const BinaryMask& m, int radius) {
  if (radius < 0) throw std::invalid_argument("dilate: radius must be >= 0");
  if (radius == 0) return m;
  const auto sq = squared_distance_transform(m);
  const double r2 = static_cast<double>(radius) * radius;
  BinaryMask out(m.width(), m.height());
  auto bits = out.bits();
  for (std::size_t i = 0; i < sq.size(); ++i) bits[i] = sq[i] <= r2 ? 1 : 0;
  return out;
}

}  // namespace doa
