#include "salpan/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include <jpeglib.h>
#include <png.h>

namespace salpan::io {

namespace fs = std::filesystem;

namespace {

enum class Format { PNG, JPEG, PNM, Unknown };

std::vector<unsigned char> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return bytes;
}

Format sniff(const std::vector<unsigned char>& b) {
  if (b.size() >= 8 && png_sig_cmp(b.data(), 0, 8) == 0) return Format::PNG;
  if (b.size() >= 3 && b[0] == 0xFF && b[1] == 0xD8 && b[2] == 0xFF) return Format::JPEG;
  if (b.size() >= 2 && b[0] == 'P' && (b[1] == '5' || b[1] == '6')) return Format::PNM;
  return Format::Unknown;
}

Raster from_bytes8(int w, int h, int channels, const unsigned char* px) {
  const auto space = channels == 1 ? ColorSpace::GRAY : ColorSpace::RGB;
  std::vector<double> data(static_cast<std::size_t>(w) * h * channels);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = px[i] / 255.0;
  return {w, h, space, std::move(data)};
}

Raster decode_png(const fs::path& path, const std::vector<unsigned char>& bytes) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
    throw IoError(path.string(), std::string("corrupt PNG: ") + image.message);
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<unsigned char> px(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, px.data(), 0, nullptr)) {
    png_image_free(&image);
    throw IoError(path.string(), std::string("corrupt PNG: ") + image.message);
  }
  return from_bytes8(static_cast<int>(image.width), static_cast<int>(image.height),
                     color ? 3 : 1, px.data());
}

struct JpegError {
  jpeg_error_mgr mgr;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegError*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

Raster decode_jpeg(const fs::path& path, const std::vector<unsigned char>& bytes) {
  jpeg_decompress_struct cinfo;
  JpegError err;
  cinfo.err = jpeg_std_error(&err.mgr);
  err.mgr.error_exit = jpeg_error_exit;
  // Recoverable warnings (e.g. truncated entropy data) decode as libjpeg pads them.
  err.mgr.output_message = [](j_common_ptr) {};
  std::vector<unsigned char> px;
  int w = 0;
  int h = 0;
  int channels = 0;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw IoError(path.string(), std::string("corrupt JPEG: ") + err.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_start_decompress(&cinfo);
  w = static_cast<int>(cinfo.output_width);
  h = static_cast<int>(cinfo.output_height);
  channels = cinfo.output_components;
  px.resize(static_cast<std::size_t>(w) * h * channels);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = px.data() + static_cast<std::size_t>(cinfo.output_scanline) * w * channels;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return from_bytes8(w, h, channels, px.data());
}

Raster decode_pnm(const fs::path& path, const std::vector<unsigned char>& bytes) {
  const int channels = bytes[1] == '5' ? 1 : 3;
  std::size_t pos = 2;
  auto next_int = [&]() -> long {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
    if (pos >= bytes.size() || !std::isdigit(bytes[pos]))
      throw IoError(path.string(), "corrupt PNM header");
    long v = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      v = v * 10 + (bytes[pos] - '0');
      if (v > (1L << 30)) throw IoError(path.string(), "corrupt PNM header");
      ++pos;
    }
    return v;
  };
  const long w = next_int();
  const long h = next_int();
  const long maxval = next_int();
  if (w < 1 || h < 1 || maxval < 1 || maxval > 65535)
    throw IoError(path.string(), "corrupt PNM header");
  ++pos;  // single whitespace before raster
  const std::size_t bps = maxval > 255 ? 2 : 1;
  const std::size_t n = static_cast<std::size_t>(w) * h * channels;
  if (bytes.size() < pos + n * bps) throw IoError(path.string(), "truncated PNM data");
  std::vector<double> data(n);
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned v = bps == 1 ? bytes[pos + i]
                                : (unsigned{bytes[pos + 2 * i]} << 8) | bytes[pos + 2 * i + 1];
    data[i] = std::min(1.0, static_cast<double>(v) / static_cast<double>(maxval));
  }
  return {static_cast<int>(w), static_cast<int>(h),
          channels == 1 ? ColorSpace::GRAY : ColorSpace::RGB, std::move(data)};
}

fs::path temp_sibling(const fs::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  return tmp;
}

void commit(const fs::path& tmp, const fs::path& path) {
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError(path.string(), "cannot rename temporary file into place");
  }
}

void write_bytes_atomic(const fs::path& path, const void* data, std::size_t n) {
  const auto tmp = temp_sibling(path);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
    if (!out) throw IoError(path.string(), "write failed");
  }
  commit(tmp, path);
}

void encode_png(const fs::path& path, int w, int h, int channels,
                const std::vector<unsigned char>& px) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(w);
  image.height = static_cast<png_uint_32>(h);
  image.format = channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_get_memory_size(image, size, 0, px.data(), 0, nullptr))
    throw IoError(path.string(), std::string("PNG encode failed: ") + image.message);
  std::vector<unsigned char> buf(size);
  if (!png_image_write_to_memory(&image, buf.data(), &size, 0, px.data(), 0, nullptr))
    throw IoError(path.string(), std::string("PNG encode failed: ") + image.message);
  write_bytes_atomic(path, buf.data(), size);
}

std::vector<unsigned char> quantize_all(std::span<const double> v) {
  std::vector<unsigned char> px(v.size());
  std::transform(v.begin(), v.end(), px.begin(), [](double x) { return quantize(x); });
  return px;
}

void encode_pgm(const fs::path& path, int w, int h, int maxval,
                const std::vector<unsigned char>& payload) {
  std::ostringstream header;
  header << "P5\n" << w << ' ' << h << '\n' << maxval << '\n';
  std::string bytes = header.str();
  bytes.append(payload.begin(), payload.end());
  write_bytes_atomic(path, bytes.data(), bytes.size());
}

}  // namespace

std::uint8_t quantize(double v) noexcept {
  if (!(v > 0.0)) return 0;
  if (v >= 1.0) return 255;
  return static_cast<std::uint8_t>(std::lround(v * 255.0));
}

Raster read_image(const fs::path& path) {
  const auto bytes = read_bytes(path);
  switch (sniff(bytes)) {
    case Format::PNG:
      return decode_png(path, bytes);
    case Format::JPEG:
      return decode_jpeg(path, bytes);
    case Format::PNM:
      return decode_pnm(path, bytes);
    case Format::Unknown:
      break;
  }
  throw IoError(path.string(), "unrecognized image format");
}

Raster read_rgb(const fs::path& path) {
  Raster r = read_image(path);
  if (r.space() == ColorSpace::RGB) return r;
  std::vector<double> data(r.pixel_count() * 3);
  auto src = r.data();
  for (std::size_t i = 0; i < r.pixel_count(); ++i)
    data[3 * i] = data[3 * i + 1] = data[3 * i + 2] = src[i];
  return {r.width(), r.height(), ColorSpace::RGB, std::move(data)};
}

SaliencyMap read_map(const fs::path& path) {
  Raster r = read_image(path);
  if (r.space() == ColorSpace::RGB) r = to_gray(r);
  auto src = r.data();
  return {r.width(), r.height(), std::vector<double>(src.begin(), src.end())};
}

GroundTruthMask read_mask(const fs::path& path) {
  const SaliencyMap m = read_map(path);
  std::vector<std::uint8_t> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = quantize(m[i]) >= 128 ? 1 : 0;
  return {m.width(), m.height(), std::move(out)};
}

void write_png(const fs::path& path, const SaliencyMap& map) {
  encode_png(path, map.width(), map.height(), 1, quantize_all(map.values()));
}

void write_png(const fs::path& path, const Raster& r) {
  if (r.space() == ColorSpace::LAB) throw InvalidSpace("write_png expects RGB or GRAY");
  encode_png(path, r.width(), r.height(), r.channels(), quantize_all(r.data()));
}

void write_pgm(const fs::path& path, const SaliencyMap& map) {
  encode_pgm(path, map.width(), map.height(), 255, quantize_all(map.values()));
}

void write_pgm(const fs::path& path, const GroundTruthMask& mask) {
  std::vector<unsigned char> px(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) px[i] = mask[i] ? 255 : 0;
  encode_pgm(path, mask.width(), mask.height(), 255, px);
}

void write_label_pgm(const fs::path& path, int width, int height, std::span<const int> labels) {
  if (labels.size() != static_cast<std::size_t>(width) * height)
    throw InvalidArgument("label image size mismatch");
  std::vector<unsigned char> px(labels.size() * 2);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto v = static_cast<unsigned>(std::clamp(labels[i], 0, 65535));
    px[2 * i] = static_cast<unsigned char>(v >> 8);
    px[2 * i + 1] = static_cast<unsigned char>(v & 0xFF);
  }
  encode_pgm(path, width, height, 65535, px);
}

void write_text_atomic(const fs::path& path, const std::string& contents) {
  write_bytes_atomic(path, contents.data(), contents.size());
}

}  // namespace salpan::io
