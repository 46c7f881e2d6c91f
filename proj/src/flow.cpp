#include "doa/flow.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>

#include "doa/error.hpp"

namespace doa {
namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

std::uint32_t load_le32(const char* p) {
  std::uint32_t v;
  std::memcpy(&v, p, 4);
  if constexpr (std::endian::native == std::endian::big) v = __builtin_bswap32(v);
  return v;
}

void store_le32(char* p, std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) v = __builtin_bswap32(v);
  std::memcpy(p, &v, 4);
}

double median_of(std::vector<double> values) {
  const std::size_t n = values.size();
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), mid);
  return (lower + upper) / 2.0;
}

}  // namespace

FlowField::FlowField(int width, int height) : width_(width), height_(height) {
  if (width < 1 || height < 1) throw std::invalid_argument("flow dimensions must be >= 1");
  uv_.assign(2 * static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0.0f);
}

FlowField::FlowField(int width, int height, std::vector<float> uv)
    : width_(width), height_(height), uv_(std::move(uv)) {
  if (width < 1 || height < 1) throw std::invalid_argument("flow dimensions must be >= 1");
  if (uv_.size() != 2 * static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("flow vector count does not match width*height");
  }
  if (!std::all_of(uv_.begin(), uv_.end(), [](float f) { return std::isfinite(f); })) {
    throw std::invalid_argument("flow contains non-finite components");
  }
}

FlowField read_flo(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto fail = [&](const std::string& what) -> FormatError {
    return FormatError(path.string() + ": " + what);
  };
  if (buf.size() < 12) throw fail("truncated header");
  const float magic = std::bit_cast<float>(load_le32(buf.data()));
  if (magic != kFloMagic) throw fail("bad .flo magic");
  const auto w = static_cast<std::int32_t>(load_le32(buf.data() + 4));
  const auto h = static_cast<std::int32_t>(load_le32(buf.data() + 8));
  if (w < 1 || h < 1 || w > 100000 || h > 100000) throw fail("illegal dimensions");
  const std::size_t n = 2 * static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (buf.size() - 12 < 4 * n) throw fail("truncated payload");
  if (buf.size() - 12 > 4 * n) throw fail("trailing bytes after payload");
  std::vector<float> uv(n);
  for (std::size_t i = 0; i < n; ++i) {
    uv[i] = std::bit_cast<float>(load_le32(buf.data() + 12 + 4 * i));
    if (!std::isfinite(uv[i])) throw fail("non-finite flow component");
  }
  return FlowField(w, h, std::move(uv));
}

void write_flo(const std::filesystem::path& path, const FlowField& flow) {
  const auto data = flow.data();
  std::vector<char> buf(12 + 4 * data.size());
  store_le32(buf.data(), std::bit_cast<std::uint32_t>(kFloMagic));
  store_le32(buf.data() + 4, static_cast<std::uint32_t>(flow.width()));
  store_le32(buf.data() + 8, static_cast<std::uint32_t>(flow.height()));
  for (std::size_t i = 0; i < data.size(); ++i) {
    store_le32(buf.data() + 12 + 4 * i, std::bit_cast<std::uint32_t>(data[i]));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error("write failed: " + path.string());
}

std::vector<double> motion_residual(const FlowField& flow) {
  const std::size_t n = static_cast<std::size_t>(flow.width()) * flow.height();
  const auto uv = flow.data();
  std::vector<double> us(n), vs(n);
  for (std::size_t i = 0; i < n; ++i) {
    us[i] = uv[2 * i];
    vs[i] = uv[2 * i + 1];
  }
  const double mu = median_of(us);
  const double mv = median_of(vs);

  std::vector<double> r(n);
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = std::hypot(us[i] - mu, vs[i] - mv);
    peak = std::max(peak, r[i]);
  }
  if (peak == 0.0) return std::vector<double>(n, 0.0);
  for (double& x : r) x /= peak;
  return r;
}

int otsu_threshold(std::span<const std::uint64_t, 256> histogram) {
  double total = 0.0, weighted = 0.0;
  for (int b = 0; b < 256; ++b) {
    total += static_cast<double>(histogram[static_cast<std::size_t>(b)]);
    weighted += static_cast<double>(b) * static_cast<double>(histogram[static_cast<std::size_t>(b)]);
  }
  int best_t = 0;
  double best = -1.0;
  double n0 = 0.0, s0 = 0.0;
  for (int t = 0; t < 256; ++t) {
    n0 += static_cast<double>(histogram[static_cast<std::size_t>(t)]);
    s0 += static_cast<double>(t) * static_cast<double>(histogram[static_cast<std::size_t>(t)]);
    const double n1 = total - n0;
    double between = 0.0;
    if (n0 > 0.0 && n1 > 0.0) {
      const double diff = s0 / n0 - (weighted - s0) / n1;
      between = (n0 / total) * (n1 / total) * diff * diff;
    }
    if (between > best) {
      best = between;
      best_t = t;
    }
  }
  return best_t;
}

MotionMask flow_saliency(const FlowField& flow, double min_area_ratio, int frame_index) {
  if (!(min_area_ratio >= 0.0 && min_area_ratio < 1.0)) {
    throw std::invalid_argument("min_area_ratio must lie in [0, 1)");
  }
  MotionMask out{BinaryMask(flow.width(), flow.height()), 1.0, frame_index};
  const auto residual = motion_residual(flow);
  if (std::all_of(residual.begin(), residual.end(), [](double r) { return r == 0.0; })) return out;

  std::vector<int> bins(residual.size());
  std::array<std::uint64_t, 256> hist{};
  for (std::size_t i = 0; i < residual.size(); ++i) {
    bins[i] = std::clamp(static_cast<int>(std::floor(residual[i] * 255.0 + 0.5)), 0, 255);
    ++hist[static_cast<std::size_t>(bins[i])];
  }
  const int t = otsu_threshold(hist);
  auto bits = out.mask.bits();
  for (std::size_t i = 0; i < bins.size(); ++i) bits[i] = bins[i] > t ? 1 : 0;

  const double area = static_cast<double>(out.mask.count());
  if (area < min_area_ratio * static_cast<double>(residual.size()) || area == 0.0) {
    out.mask = BinaryMask(flow.width(), flow.height());
    return out;
  }
  out.threshold_used = (static_cast<double>(t) + 0.5) / 255.0;
  return out;
}

BinaryMask warp_mask(const BinaryMask& mask, const FlowField& flow) {
  if (mask.width() != flow.width() || mask.height() != flow.height()) {
    throw DimensionError("warp_mask: mask and flow dimensions differ");
  }
  BinaryMask out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      const int tx = x + static_cast<int>(std::lround(flow.u(x, y)));
      const int ty = y + static_cast<int>(std::lround(flow.v(x, y)));
      if (tx >= 0 && ty >= 0 && tx < mask.width() && ty < mask.height()) out.set(tx, ty);
    }
  }
  return out;
}

}  // namespace doa
