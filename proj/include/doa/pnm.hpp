#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "doa/mask.hpp"

namespace doa {

/// 8-bit luminance frame, row-major.
struct GrayFrame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> intensity;

  GrayFrame() = default;
  GrayFrame(int w, int h);
  GrayFrame(int w, int h, std::vector<std::uint8_t> pixels);

  std::uint8_t at(int x, int y) const noexcept {
    return intensity[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                     static_cast<std::size_t>(x)];
  }
  std::uint8_t& at(int x, int y) noexcept {
    return intensity[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                     static_cast<std::size_t>(x)];
  }
  const std::uint8_t* row(int y) const noexcept {
    return intensity.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(width);
  }

  friend bool operator==(const GrayFrame&, const GrayFrame&) = default;
};

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // interleaved R,G,B
};

/// Y = round(0.299 R + 0.587 G + 0.114 B), computed in integers.
constexpr std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
  return static_cast<std::uint8_t>((299u * r + 587u * g + 114u * b + 500u) / 1000u);
}

/// Reads a binary PGM (P5) or PPM (P6, converted to luma). maxval must be 255.
GrayFrame read_frame(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayFrame& frame);
void write_ppm(const std::filesystem::path& path, const RgbImage& image);

/// Mask PGM: 0 = background, 255 = foreground, anything else is a FormatError.
BinaryMask read_mask_pgm(const std::filesystem::path& path);
void write_mask_pgm(const std::filesystem::path& path, const BinaryMask& mask);

}  // namespace doa
