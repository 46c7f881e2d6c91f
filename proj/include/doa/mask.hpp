#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace doa {

/// Axis-aligned pixel box. `x`,`y` are the inclusive top-left corner.
struct BBox {
  int x = 0;
  int y = 0;
  int w = 1;
  int h = 1;

  int right() const noexcept { return x + w; }   // exclusive
  int bottom() const noexcept { return y + h; }  // exclusive
  long long area() const noexcept { return static_cast<long long>(w) * h; }
  bool within(int width, int height) const noexcept {
    return x >= 0 && y >= 0 && right() <= width && bottom() <= height;
  }

  friend bool operator==(const BBox&, const BBox&) = default;
};

/// Throws std::invalid_argument unless w >= 1 and h >= 1.
BBox make_bbox(int x, int y, int w, int h);

/// Row-major foreground/background raster. Stored one byte per pixel (0 or 1)
/// so the SIMD kernels can stream over it directly.
class BinaryMask {
 public:
  /// All-background mask.
  BinaryMask(int width, int height);
  /// `bits` must hold width*height bytes, each 0 or 1.
  BinaryMask(int width, int height, std::vector<std::uint8_t> bits);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return bits_.size(); }

  bool at(int x, int y) const noexcept { return bits_[index(x, y)] != 0; }
  void set(int x, int y, bool on = true) noexcept { bits_[index(x, y)] = on ? 1 : 0; }
  bool operator[](std::size_t i) const noexcept { return bits_[i] != 0; }

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  std::span<std::uint8_t> bits() noexcept { return bits_; }

  std::size_t count() const noexcept;
  bool none() const noexcept { return count() == 0; }
  bool same_shape(const BinaryMask& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  BinaryMask& operator|=(const BinaryMask& other);
  BinaryMask& operator&=(const BinaryMask& other);
  /// Clears every pixel set in `other`.
  BinaryMask& subtract(const BinaryMask& other);

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> bits_;
};

BinaryMask operator|(BinaryMask a, const BinaryMask& b);
BinaryMask operator&(BinaryMask a, const BinaryMask& b);

/// Filled rectangle `box` clipped to a width x height frame.
BinaryMask mask_from_box(int width, int height, const BBox& box);

/// Throws DimensionError when the shapes differ.
void require_same_shape(const BinaryMask& a, const BinaryMask& b);

/// |a & b| / |a | b|, 0 when the union is empty.
double iou(const BinaryMask& a, const BinaryMask& b);
double iou(const BBox& a, const BBox& b);

/// |inner & cover| / |inner|. Throws std::invalid_argument on an empty inner.
double overlap_ratio(const BinaryMask& inner, const BinaryMask& cover);

std::size_t intersection_count(const BinaryMask& a, const BinaryMask& b);
bool is_subset(const BinaryMask& a, const BinaryMask& b);

/// Pixel-wise OR of a non-empty list of equally sized masks.
BinaryMask union_all(std::span<const BinaryMask> masks);

/// Morphology with the Euclidean disk {dx^2 + dy^2 <= r^2}. Pixels outside
/// the frame count as background, so erosion eats in from the frame border.
BinaryMask erode(const BinaryMask& m, int radius);
BinaryMask dilate(const BinaryMask& m, int radius);

/// Per-pixel Euclidean distance to the nearest foreground pixel.
struct DistanceMap {
  int width = 0;
  int height = 0;
  /// +infinity everywhere when the source mask was empty.
  std::vector<double> values;

  double at(int x, int y) const noexcept {
    return values[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(x)];
  }
};

/// Exact squared distances (integers held in doubles). Pixels with no
/// foreground anywhere hold +infinity.
std::vector<double> squared_distance_transform(const BinaryMask& pos);
DistanceMap distance_transform(const BinaryMask& pos);

/// Column-major run lengths, alternating background/foreground and starting
/// with a (possibly zero) background run.
std::vector<std::uint32_t> rle_encode(const BinaryMask& m);
/// Throws FormatError when the counts do not sum to width*height.
BinaryMask rle_decode(std::span<const std::uint32_t> counts, int width, int height);

/// Tightest box around the foreground. Throws std::invalid_argument when empty.
BBox bbox_of(const BinaryMask& m);

}  // namespace doa
