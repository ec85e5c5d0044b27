#include "dasr/imaging/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include "dasr/error.hpp"

namespace dasr {

unsigned char quantize_to_byte(double v) {
  const double c = std::clamp(std::isnan(v) ? 0.0 : v, 0.0, 1.0);
  return static_cast<unsigned char>(std::floor(c * 255.0 + 0.5));
}

Image quantize_8bit(const Image& img) {
  Image out = img;
  for (double& v : out.values()) v = quantize_to_byte(v) / 255.0;
  return out;
}

Image load_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("missing file: " + path.string());
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str()))
    throw FormatError("unsupported or corrupt PNG " + path.string() + ": " + png.message);
  const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
  png.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const int channels = color ? 3 : 1;
  std::vector<unsigned char> buf(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, buf.data(), 0, nullptr)) {
    std::string msg = png.message;
    png_image_free(&png);
    throw FormatError("failed to decode " + path.string() + ": " + msg);
  }
  const int h = static_cast<int>(png.height);
  const int w = static_cast<int>(png.width);
  Image img(h, w, channels);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < channels; ++c)
        img.at(c, y, x) = buf[(static_cast<std::size_t>(y) * w + x) * channels + c] / 255.0;
  return img;
}

void save_image(const Image& img, const std::filesystem::path& path) {
  DASR_REQUIRE(!img.empty(), "save_image: empty image");
  DASR_REQUIRE(img.channels() == 1 || img.channels() == 3, "save_image: need 1 or 3 channels");
  const int h = img.height();
  const int w = img.width();
  const int ch = img.channels();
  std::vector<unsigned char> buf(static_cast<std::size_t>(h) * w * ch);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < ch; ++c)
        buf[(static_cast<std::size_t>(y) * w + x) * ch + c] = quantize_to_byte(img.at(c, y, x));
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(w);
  png.height = static_cast<png_uint_32>(h);
  png.format = ch == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&png, path.c_str(), 0, buf.data(), 0, nullptr))
    throw IoError("failed to write " + path.string() + ": " + png.message);
}

}  // namespace dasr
