#include "motionscope/image_io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

#include <png.h>

#include "motionscope/error.hpp"

namespace motionscope {
namespace {

FrameImage from_bytes(const std::vector<unsigned char>& bytes, int width, int height,
                      int channels) {
  FrameImage img;
  img.width = width;
  img.height = height;
  img.channels = channels;
  img.values.resize(bytes.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) img.values[i] = bytes[i] / 255.0;
  return img;
}

FrameImage load_png(const std::filesystem::path& path) {
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) throw InputError("cannot open image: " + path.string());
  auto closer = std::unique_ptr<std::FILE, int (*)(std::FILE*)>(fp, &std::fclose);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw InputError("libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw InputError("failed to decode PNG: " + path.string());
  }

  png_init_io(png, fp);
  png_read_info(png, info);

  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_packing(png);
  if (png_get_color_type(png, info) == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY &&
      png_get_bit_depth(png, info) < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  png_read_update_info(png, info);

  const int width = static_cast<int>(png_get_image_width(png, info));
  const int height = static_cast<int>(png_get_image_height(png, info));
  const int channels = static_cast<int>(png_get_channels(png, info));
  if (channels != 1 && channels != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw InputError("unsupported PNG channel count in " + path.string());
  }

  std::vector<unsigned char> bytes(static_cast<std::size_t>(width) * height * channels);
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y) {
    rows[y] = bytes.data() + static_cast<std::size_t>(y) * width * channels;
  }
  png_read_image(png, rows.data());
  png_destroy_read_struct(&png, &info, nullptr);
  return from_bytes(bytes, width, height, channels);
}

FrameImage load_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open image: " + path.string());

  std::string magic;
  in >> magic;
  const int channels = magic == "P6" ? 3 : magic == "P5" ? 1 : 0;
  if (channels == 0) throw InputError("unsupported PNM magic in " + path.string());

  auto next_int = [&in, &path]() {
    // Skip whitespace and '#' comment lines between header tokens.
    while (true) {
      int c = in.peek();
      if (c == '#') {
        std::string line;
        std::getline(in, line);
      } else if (std::isspace(c)) {
        in.get();
      } else {
        break;
      }
    }
    int v = -1;
    in >> v;
    if (!in || v < 0) throw InputError("malformed PNM header in " + path.string());
    return v;
  };

  const int width = next_int();
  const int height = next_int();
  const int maxval = next_int();
  if (width <= 0 || height <= 0) throw InputError("bad PNM dimensions in " + path.string());
  if (maxval != 255) throw InputError("only 8-bit PNM supported: " + path.string());
  in.get();  // single whitespace before raster

  std::vector<unsigned char> bytes(static_cast<std::size_t>(width) * height * channels);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
    throw InputError("truncated PNM raster in " + path.string());
  }
  return from_bytes(bytes, width, height, channels);
}

}  // namespace

FrameImage load_image(const std::filesystem::path& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw InputError("cannot open image: " + path.string());
  unsigned char header[8] = {};
  probe.read(reinterpret_cast<char*>(header), sizeof(header));
  const bool is_png = probe.gcount() == 8 && !png_sig_cmp(header, 0, 8);
  probe.close();

  return is_png ? load_png(path) : load_pnm(path);
}

}  // namespace motionscope
