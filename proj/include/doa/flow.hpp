#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "doa/mask.hpp"

namespace doa {

/// Dense optical flow, row-major interleaved (u, v) in pixels per frame.
class FlowField {
 public:
  FlowField(int width, int height);  // zero flow
  /// Throws std::invalid_argument on a length mismatch or non-finite values.
  FlowField(int width, int height, std::vector<float> uv);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  float u(int x, int y) const noexcept { return uv_[offset(x, y)]; }
  float v(int x, int y) const noexcept { return uv_[offset(x, y) + 1]; }
  void set(int x, int y, float u, float v) noexcept {
    uv_[offset(x, y)] = u;
    uv_[offset(x, y) + 1] = v;
  }
  std::span<const float> data() const noexcept { return uv_; }

  friend bool operator==(const FlowField&, const FlowField&) = default;

 private:
  std::size_t offset(int x, int y) const noexcept {
    return 2 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                static_cast<std::size_t>(x));
  }

  int width_;
  int height_;
  std::vector<float> uv_;
};

inline constexpr float kFloMagic = 202021.25f;

/// Middlebury .flo: float magic, int32 width, int32 height, then row-major
/// float32 (u, v) pairs, all little-endian.
FlowField read_flo(const std::filesystem::path& path);
void write_flo(const std::filesystem::path& path, const FlowField& flow);

struct MotionMask {
  BinaryMask mask;
  /// Normalized residual level separating the classes; 1.0 for an empty mask.
  double threshold_used = 1.0;
  int frame_index = 0;
};

inline constexpr double kDefaultMinAreaRatio = 0.001;

/// Camera-compensated motion residual in [0, 1]: |flow - median flow|,
/// normalized by its maximum. All zeros when the residual vanishes.
std::vector<double> motion_residual(const FlowField& flow);

/// Otsu threshold on a 256-bin histogram. Returns t such that bins > t form
/// the foreground class; ties go to the smallest t.
int otsu_threshold(std::span<const std::uint64_t, 256> histogram);

/// Binary motion mask: median-compensated residual magnitude, Otsu-binarized.
/// Masks covering less than min_area_ratio of the frame are dropped.
MotionMask flow_saliency(const FlowField& flow, double min_area_ratio = kDefaultMinAreaRatio,
                         int frame_index = 0);

/// Forward-splats each foreground pixel along its rounded flow vector.
BinaryMask warp_mask(const BinaryMask& mask, const FlowField& flow);

}  // namespace doa
