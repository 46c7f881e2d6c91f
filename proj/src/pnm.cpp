#include "doa/pnm.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>

#include "doa/error.hpp"

namespace doa {
namespace {

struct PnmImage {
  char kind = 0;  // '5' or '6'
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;
};

class HeaderReader {
 public:
  HeaderReader(const std::vector<char>& buf, const std::filesystem::path& path)
      : buf_(buf), path_(path) {}

  int next_int() {
    skip_space_and_comments();
    if (pos_ >= buf_.size() || !std::isdigit(static_cast<unsigned char>(buf_[pos_]))) {
      fail("expected integer in header");
    }
    long long v = 0;
    while (pos_ < buf_.size() && std::isdigit(static_cast<unsigned char>(buf_[pos_]))) {
      v = v * 10 + (buf_[pos_++] - '0');
      if (v > 1'000'000) fail("header value too large");
    }
    return static_cast<int>(v);
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_start() {
    if (pos_ >= buf_.size() || !std::isspace(static_cast<unsigned char>(buf_[pos_]))) {
      fail("missing whitespace before raster");
    }
    return pos_ + 1;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw FormatError(path_.string() + ": " + what);
  }

  std::size_t pos_ = 2;

 private:
  void skip_space_and_comments() {
    while (pos_ < buf_.size()) {
      if (std::isspace(static_cast<unsigned char>(buf_[pos_]))) {
        ++pos_;
      } else if (buf_[pos_] == '#') {
        while (pos_ < buf_.size() && buf_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<char>& buf_;
  const std::filesystem::path& path_;
};

PnmImage read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  HeaderReader hdr(buf, path);
  if (buf.size() < 2 || buf[0] != 'P' || (buf[1] != '5' && buf[1] != '6')) {
    hdr.fail("not a binary PGM/PPM (expected P5 or P6)");
  }
  PnmImage img;
  img.kind = buf[1];
  img.width = hdr.next_int();
  img.height = hdr.next_int();
  const int maxval = hdr.next_int();
  if (img.width < 1 || img.height < 1) hdr.fail("dimensions must be >= 1");
  if (maxval != 255) hdr.fail("maxval must be 255, got " + std::to_string(maxval));
  const std::size_t start = hdr.raster_start();
  const std::size_t channels = img.kind == '6' ? 3 : 1;
  const std::size_t need = static_cast<std::size_t>(img.width) * img.height * channels;
  if (buf.size() - start < need) hdr.fail("truncated raster");
  if (buf.size() - start > need) hdr.fail("trailing bytes after raster");
  img.data.assign(buf.begin() + static_cast<std::ptrdiff_t>(start), buf.end());
  return img;
}

void write_pnm(const std::filesystem::path& path, char kind, int w, int h,
               const std::vector<std::uint8_t>& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << 'P' << kind << '\n' << w << ' ' << h << "\n255\n";
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace

GrayFrame::GrayFrame(int w, int h)
    : width(w), height(h), intensity(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0) {
  if (w < 1 || h < 1) throw std::invalid_argument("frame dimensions must be >= 1");
}

GrayFrame::GrayFrame(int w, int h, std::vector<std::uint8_t> pixels)
    : width(w), height(h), intensity(std::move(pixels)) {
  if (w < 1 || h < 1) throw std::invalid_argument("frame dimensions must be >= 1");
  if (intensity.size() != static_cast<std::size_t>(w) * static_cast<std::size_t>(h)) {
    throw std::invalid_argument("frame raster length does not match width*height");
  }
}

GrayFrame read_frame(const std::filesystem::path& path) {
  PnmImage img = read_pnm(path);
  if (img.kind == '5') return GrayFrame(img.width, img.height, std::move(img.data));
  std::vector<std::uint8_t> y(static_cast<std::size_t>(img.width) * img.height);
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = luma(img.data[3 * i], img.data[3 * i + 1], img.data[3 * i + 2]);
  }
  return GrayFrame(img.width, img.height, std::move(y));
}

void write_pgm(const std::filesystem::path& path, const GrayFrame& frame) {
  write_pnm(path, '5', frame.width, frame.height, frame.intensity);
}

void write_ppm(const std::filesystem::path& path, const RgbImage& image) {
  write_pnm(path, '6', image.width, image.height, image.rgb);
}

BinaryMask read_mask_pgm(const std::filesystem::path& path) {
  PnmImage img = read_pnm(path);
  if (img.kind != '5') throw FormatError(path.string() + ": mask must be a P5 PGM");
  std::vector<std::uint8_t> bits(img.data.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const std::uint8_t v = img.data[i];
    if (v != 0 && v != 255) {
      throw FormatError(path.string() + ": mask pixel value " + std::to_string(v) +
                        " is neither 0 nor 255");
    }
    bits[i] = v ? 1 : 0;
  }
  return BinaryMask(img.width, img.height, std::move(bits));
}

void write_mask_pgm(const std::filesystem::path& path, const BinaryMask& mask) {
  std::vector<std::uint8_t> data(mask.size());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = mask[i] ? 255 : 0;
  write_pnm(path, '5', mask.width(), mask.height(), data);
}

}  // namespace doa
