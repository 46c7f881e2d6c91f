#include <string>

#include "doa/error.hpp"
#include "doa/mask.hpp"

namespace doa {

std::vector<std::uint32_t> rle_encode(const BinaryMask& m) {
  std::vector<std::uint32_t> counts;
  bool current = false;
  std::uint32_t run = 0;
  for (int x = 0; x < m.width(); ++x) {
    for (int y = 0; y < m.height(); ++y) {
      const bool v = m.at(x, y);
      if (v != current) {
        counts.push_back(run);
        run = 0;
        current = v;
      }
      ++run;
    }
  }
  counts.push_back(run);
  return counts;
}

BinaryMask rle_decode(std::span<const std::uint32_t> counts, int width, int height) {
  BinaryMask m(width, height);
  const unsigned long long total = static_cast<unsigned long long>(width) * height;
  unsigned long long sum = 0;
  for (auto c : counts) sum += c;
  if (sum != total) {
    throw FormatError("rle counts sum to " + std::to_string(sum) + ", expected " +
                      std::to_string(total));
  }
  unsigned long long pos = 0;
  bool fg = false;
  for (auto c : counts) {
    if (fg) {
      for (unsigned long long i = pos; i < pos + c; ++i) {
        m.set(static_cast<int>(i / height), static_cast<int>(i % height));
      }
    }
    pos += c;
    fg = !fg;
  }
  return m;
}

}  // namespace doa
