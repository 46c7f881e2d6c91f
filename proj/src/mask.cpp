#include "doa/mask.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "doa/error.hpp"
#include "doa/simd.hpp"

namespace doa {

BBox make_bbox(int x, int y, int w, int h) {
  if (w < 1 || h < 1) {
    throw std::invalid_argument("bbox needs w >= 1 and h >= 1, got " + std::to_string(w) + "x" +
                                std::to_string(h));
  }
  return BBox{x, y, w, h};
}

BinaryMask::BinaryMask(int width, int height) : width_(width), height_(height) {
  if (width < 1 || height < 1) throw std::invalid_argument("mask dimensions must be >= 1");
  bits_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  if (width < 1 || height < 1) throw std::invalid_argument("mask dimensions must be >= 1");
  if (bits_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("mask raster length does not match width*height");
  }
  if (std::any_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b > 1; })) {
    throw std::invalid_argument("mask raster bytes must be 0 or 1");
  }
}

std::size_t BinaryMask::count() const noexcept {
  return simd::active().count_set(bits_.data(), bits_.size());
}

BinaryMask& BinaryMask::operator|=(const BinaryMask& other) {
  require_same_shape(*this, other);
  simd::active().or_into(bits_.data(), other.bits_.data(), bits_.size());
  return *this;
}

BinaryMask& BinaryMask::operator&=(const BinaryMask& other) {
  require_same_shape(*this, other);
  simd::active().and_into(bits_.data(), other.bits_.data(), bits_.size());
  return *this;
}

BinaryMask& BinaryMask::subtract(const BinaryMask& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= static_cast<std::uint8_t>(1 - other.bits_[i]);
  return *this;
}

BinaryMask operator|(BinaryMask a, const BinaryMask& b) { return a |= b; }
BinaryMask operator&(BinaryMask a, const BinaryMask& b) { return a &= b; }

BinaryMask mask_from_box(int width, int height, const BBox& box) {
  BinaryMask m(width, height);
  const int x0 = std::max(0, box.x), x1 = std::min(width, box.right());
  const int y0 = std::max(0, box.y), y1 = std::min(height, box.bottom());
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) m.set(x, y);
  }
  return m;
}

void require_same_shape(const BinaryMask& a, const BinaryMask& b) {
  if (!a.same_shape(b)) {
    throw DimensionError("mask dimensions differ: " + std::to_string(a.width()) + "x" +
                         std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                         std::to_string(b.height()));
  }
}

std::size_t intersection_count(const BinaryMask& a, const BinaryMask& b) {
  require_same_shape(a, b);
  return simd::active().count_and(a.bits().data(), b.bits().data(), a.size());
}

bool is_subset(const BinaryMask& a, const BinaryMask& b) {
  return intersection_count(a, b) == a.count();
}

double iou(const BinaryMask& a, const BinaryMask& b) {
  require_same_shape(a, b);
  const auto& k = simd::active();
  const std::size_t uni = k.count_or(a.bits().data(), b.bits().data(), a.size());
  if (uni == 0) return 0.0;
  const std::size_t inter = k.count_and(a.bits().data(), b.bits().data(), a.size());
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double iou(const BBox& a, const BBox& b) {
  const long long iw = std::max(0, std::min(a.right(), b.right()) - std::max(a.x, b.x));
  const long long ih = std::max(0, std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y));
  const long long inter = iw * ih;
  const long long uni = a.area() + b.area() - inter;
  if (uni <= 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double overlap_ratio(const BinaryMask& inner, const BinaryMask& cover) {
  require_same_shape(inner, cover);
  const std::size_t n = inner.count();
  if (n == 0) throw std::invalid_argument("overlap_ratio: inner mask is empty");
  return static_cast<double>(intersection_count(inner, cover)) / static_cast<double>(n);
}

BinaryMask union_all(std::span<const BinaryMask> masks) {
  if (masks.empty()) throw std::invalid_argument("union_all: empty mask list");
  BinaryMask out = masks.front();
  for (const auto& m : masks.subspan(1)) out |= m;
  return out;
}

BBox bbox_of(const BinaryMask& m) {
  int x0 = m.width(), y0 = m.height(), x1 = -1, y1 = -1;
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (!m.at(x, y)) continue;
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (x1 < 0) throw std::invalid_argument("bbox_of: mask is empty");
  return BBox{x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

}  // namespace doa
