#include "sttd/image_io.hpp"

#include "sttd/error.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace sttd {

namespace fs = std::filesystem;

namespace {

std::string lower_extension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return char(std::tolower(c)); });
  return ext;
}

std::vector<unsigned char> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

int bits_for(int maxval) { return maxval > 255 ? 16 : 8; }

}  // namespace

// ---------------------------------------------------------------------------
// PGM

RawImage read_pgm(const fs::path& path) {
  const std::vector<unsigned char> bytes = read_bytes(path);
  const std::string name = path.string();
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) -> IoError { return IoError("'" + name + "': " + why); };
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&] {
    skip_space();
    long v = 0;
    std::size_t digits = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      v = v * 10 + (bytes[pos++] - '0');
      if (v > 1 << 30) throw fail("header value too large");
      ++digits;
    }
    if (digits == 0) throw fail("malformed PGM header");
    return v;
  };

  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') throw fail("not a binary PGM (P5)");
  pos = 2;
  const long width = read_int();
  const long height = read_int();
  const long maxval = read_int();
  if (width < 1 || height < 1) throw fail("empty image");
  if (maxval < 1 || maxval > 65535) throw fail("maxval out of range");
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw fail("malformed PGM header");
  ++pos;

  const std::size_t bpp = maxval > 255 ? 2 : 1;
  const std::size_t need = std::size_t(width) * std::size_t(height) * bpp;
  if (bytes.size() - pos < need) throw fail("truncated pixel data");

  RawImage img;
  img.maxval = int(maxval);
  img.pixels.resize(height, width);
  for (long r = 0; r < height; ++r) {
    for (long c = 0; c < width; ++c) {
      std::uint16_t v = bytes[pos++];
      if (bpp == 2) v = std::uint16_t((v << 8) | bytes[pos++]);
      if (v > maxval) throw fail("sample exceeds maxval");
      img.pixels(r, c) = v;
    }
  }
  return img;
}

void write_pgm(const fs::path& path, const RawImage& img) {
  const std::string header = "P5\n" + std::to_string(img.pixels.cols()) + " " +
                             std::to_string(img.pixels.rows()) + "\n" + std::to_string(img.maxval) + "\n";
  std::vector<unsigned char> bytes(header.begin(), header.end());
  const bool wide = img.maxval > 255;
  bytes.reserve(bytes.size() + std::size_t(img.pixels.size()) * (wide ? 2 : 1));
  for (Eigen::Index r = 0; r < img.pixels.rows(); ++r) {
    for (Eigen::Index c = 0; c < img.pixels.cols(); ++c) {
      const std::uint16_t v = img.pixels(r, c);
      if (wide) bytes.push_back(static_cast<unsigned char>(v >> 8));
      bytes.push_back(static_cast<unsigned char>(v & 0xff));
    }
  }
  write_bytes(path, bytes);
}

// ---------------------------------------------------------------------------
// PNG

namespace {

struct PngBuffer {
  const std::vector<unsigned char>* data;
  std::size_t pos = 0;
};

void png_read_from_buffer(png_structp png, png_bytep out, png_size_t n) {
  auto* buf = static_cast<PngBuffer*>(png_get_io_ptr(png));
  if (buf->pos + n > buf->data->size()) png_error(png, "unexpected end of data");
  std::copy_n(buf->data->data() + buf->pos, n, out);
  buf->pos += n;
}

void png_write_to_buffer(png_structp png, png_bytep in, png_size_t n) {
  auto* out = static_cast<std::vector<unsigned char>*>(png_get_io_ptr(png));
  out->insert(out->end(), in, in + n);
}

void png_flush_noop(png_structp) {}

// Everything libpng touches lives on the heap so a longjmp back into the
// reader never leaves a local in an indeterminate state.
struct PngReadState {
  std::vector<unsigned char> file;
  PngBuffer buffer{nullptr};
  std::vector<unsigned char> pixels;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0, height = 0;
  int bit_depth = 0, color_type = 0;
  char error[200] = {0};
};

void png_error_handler(png_structp png, png_const_charp msg) {
  auto* st = static_cast<PngReadState*>(png_get_error_ptr(png));
  if (st) std::snprintf(st->error, sizeof st->error, "%s", msg);
  png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

}  // namespace

RawImage read_png(const fs::path& path) {
  const auto st = std::make_unique<PngReadState>();
  st->file = read_bytes(path);
  st->buffer.data = &st->file;
  const std::string name = path.string();
  if (st->file.size() < 8 || png_sig_cmp(st->file.data(), 0, 8) != 0) {
    throw IoError("'" + name + "': not a PNG file");
  }

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, st.get(), png_error_handler,
                                           png_warning_handler);
  if (!png) throw IoError("'" + name + "': libpng initialization failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("'" + name + "': libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("'" + name + "': " + st->error);
  }
  png_set_read_fn(png, &st->buffer, png_read_from_buffer);
  png_read_info(png, info);
  st->width = png_get_image_width(png, info);
  st->height = png_get_image_height(png, info);
  st->bit_depth = png_get_bit_depth(png, info);
  st->color_type = png_get_color_type(png, info);
  if (st->color_type != PNG_COLOR_TYPE_GRAY && st->color_type != PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_error(png, "only grayscale PNG frames are supported");
  }
  if (st->bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (st->color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  st->pixels.resize(rowbytes * st->height);
  st->rows.resize(st->height);
  for (png_uint_32 r = 0; r < st->height; ++r) st->rows[r] = st->pixels.data() + r * rowbytes;
  png_read_image(png, st->rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  RawImage img;
  const bool wide = st->bit_depth == 16;
  img.maxval = wide ? 65535 : 255;
  img.pixels.resize(st->height, st->width);
  for (png_uint_32 r = 0; r < st->height; ++r) {
    const unsigned char* row = st->rows[r];
    for (png_uint_32 c = 0; c < st->width; ++c) {
      img.pixels(r, c) = wide ? std::uint16_t((row[2 * c] << 8) | row[2 * c + 1]) : row[c];
    }
  }
  return img;
}

void write_png(const fs::path& path, const RawImage& img) {
  // Rows are prepared up front; the write itself only reads them.
  const bool wide = img.maxval > 255;
  const auto height = png_uint_32(img.pixels.rows());
  const auto width = png_uint_32(img.pixels.cols());
  auto st = std::make_unique<PngReadState>();
  st->pixels.resize(std::size_t(width) * height * (wide ? 2 : 1));
  st->rows.resize(height);
  for (png_uint_32 r = 0; r < height; ++r) {
    unsigned char* row = st->pixels.data() + std::size_t(r) * width * (wide ? 2 : 1);
    st->rows[r] = row;
    for (png_uint_32 c = 0; c < width; ++c) {
      const std::uint16_t v = img.pixels(r, c);
      if (wide) {
        row[2 * c] = static_cast<unsigned char>(v >> 8);
        row[2 * c + 1] = static_cast<unsigned char>(v & 0xff);
      } else {
        row[c] = static_cast<unsigned char>(v);
      }
    }
  }
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, st.get(), png_error_handler,
                                            png_warning_handler);
  if (!png) throw IoError("libpng initialization failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("'" + path.string() + "': " + st->error);
  }
  png_set_write_fn(png, &st->file, png_write_to_buffer, png_flush_noop);
  png_set_IHDR(png, info, width, height, wide ? 16 : 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, st->rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  write_bytes(path, st->file);
}

// ---------------------------------------------------------------------------

RawImage read_raw(const fs::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".pgm") return read_pgm(path);
  if (ext == ".png") return read_png(path);
  throw IoError("'" + path.string() + "': unsupported image format");
}

Image read_image(const fs::path& path, int* bit_depth) {
  const RawImage raw = read_raw(path);
  if (bit_depth) *bit_depth = bits_for(raw.maxval);
  return raw.pixels.cast<double>() / double(raw.maxval);
}

RawImage quantize(const Image& img, int bits) {
  if (bits != 8 && bits != 16) throw InvalidArgument("quantize: bits must be 8 or 16");
  RawImage raw;
  raw.maxval = bits == 8 ? 255 : 65535;
  const double scale = raw.maxval;
  raw.pixels = img.unaryExpr([scale](double v) {
    const double c = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
    return std::uint16_t(std::lround(c * scale));
  });
  return raw;
}

void write_mask_pgm(const fs::path& path, const Mask& mask) {
  RawImage raw;
  raw.maxval = 255;
  raw.pixels = mask.unaryExpr([](std::uint8_t v) { return std::uint16_t(v ? 255 : 0); });
  write_pgm(path, raw);
}

Mask read_mask(const fs::path& path) {
  const RawImage raw = read_raw(path);
  return raw.pixels.unaryExpr([](std::uint16_t v) { return std::uint8_t(v ? 1 : 0); });
}

std::vector<fs::path> list_frames(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("'" + dir.string() + "' is not a directory");
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = lower_extension(entry.path());
    if (ext == ".pgm" || ext == ".png") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  return out;
}

FrameSequence read_sequence(const fs::path& dir) {
  const std::vector<fs::path> files = list_frames(dir);
  if (files.empty()) throw IoError("no .pgm or .png frames in '" + dir.string() + "'");
  FrameSequence seq;
  seq.source = dir.string();
  for (const fs::path& f : files) {
    int bits = 0;
    seq.frames.push_back(read_image(f, &bits));
    seq.bit_depth = std::max(seq.bit_depth, bits);
    if (seq.frames.back().rows() != seq.rows() || seq.frames.back().cols() != seq.cols()) {
      throw IoError("'" + f.string() + "' differs in size from the first frame");
    }
  }
  return seq;
}

TargetTruth read_truth_csv(const fs::path& path, std::size_t frames) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line)) throw IoError("'" + path.string() + "': empty truth file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "frame,row,col,a,b") throw IoError("'" + path.string() + "': expected header frame,row,col,a,b");
  TargetTruth truth;
  truth.frames.resize(frames);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    long frame = -1;
    Target t;
    std::string extra;
    if (!(fields >> frame >> t.row >> t.col >> t.a >> t.b) || (fields >> extra) || frame < 0) {
      throw IoError("'" + path.string() + "': malformed row " + std::to_string(lineno));
    }
    if (std::size_t(frame) >= truth.frames.size()) {
      if (frames != 0) {
        throw IoError("'" + path.string() + "': frame " + std::to_string(frame) + " out of range");
      }
      truth.frames.resize(std::size_t(frame) + 1);
    }
    truth.frames[std::size_t(frame)].push_back(t);
  }
  return truth;
}

std::string truth_to_csv(const TargetTruth& truth) {
  std::string out = "frame,row,col,a,b\n";
  for (std::size_t f = 0; f < truth.frames.size(); ++f) {
    for (const Target& t : truth.frames[f]) {
      out += std::to_string(f) + "," + format_fixed(t.row) + "," + format_fixed(t.col) + "," +
             std::to_string(t.a) + "," + std::to_string(t.b) + "\n";
    }
  }
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  write_bytes(path, std::vector<unsigned char>(text.begin(), text.end()));
}

std::string read_text(const fs::path& path) {
  const std::vector<unsigned char> bytes = read_bytes(path);
  return {bytes.begin(), bytes.end()};
}

}  // namespace sttd
