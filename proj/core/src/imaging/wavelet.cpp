#include "dasr/imaging/wavelet.hpp"

#include "dasr/error.hpp"

namespace dasr {

HaarBands haar_decompose(const Image& img) {
  DASR_REQUIRE(!img.empty(), "haar_decompose: empty image");
  DASR_REQUIRE(img.height() % 2 == 0 && img.width() % 2 == 0,
               "haar_decompose: image dims must be even");
  const int h = img.height() / 2;
  const int w = img.width() / 2;
  const int ch = img.channels();
  HaarBands out{Image(h, w, ch), Image(h, w, ch), Image(h, w, ch), Image(h, w, ch)};
  for (int c = 0; c < ch; ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const double a = img.at(c, 2 * y, 2 * x);
        const double b = img.at(c, 2 * y, 2 * x + 1);
        const double cc = img.at(c, 2 * y + 1, 2 * x);
        const double d = img.at(c, 2 * y + 1, 2 * x + 1);
        out.ll.at(c, y, x) = 0.5 * (a + b + cc + d);
        out.lh.at(c, y, x) = 0.5 * (a - b + cc - d);
        out.hl.at(c, y, x) = 0.5 * (a + b - cc - d);
        out.hh.at(c, y, x) = 0.5 * (a - b - cc + d);
      }
  return out;
}

Image haar_reconstruct(const HaarBands& bands) {
  DASR_REQUIRE(!bands.ll.empty(), "haar_reconstruct: empty subbands");
  DASR_REQUIRE(bands.ll.same_shape(bands.lh) && bands.ll.same_shape(bands.hl) &&
                   bands.ll.same_shape(bands.hh),
               "haar_reconstruct: subband shape mismatch");
  const int h = bands.ll.height();
  const int w = bands.ll.width();
  const int ch = bands.ll.channels();
  Image out(2 * h, 2 * w, ch);
  for (int c = 0; c < ch; ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const double ll = bands.ll.at(c, y, x);
        const double lh = bands.lh.at(c, y, x);
        const double hl = bands.hl.at(c, y, x);
        const double hh = bands.hh.at(c, y, x);
        out.at(c, 2 * y, 2 * x) = 0.5 * (ll + lh + hl + hh);
        out.at(c, 2 * y, 2 * x + 1) = 0.5 * (ll - lh + hl - hh);
        out.at(c, 2 * y + 1, 2 * x) = 0.5 * (ll + lh - hl - hh);
        out.at(c, 2 * y + 1, 2 * x + 1) = 0.5 * (ll - lh - hl + hh);
      }
  return out;
}

SubbandStack wavelet_highfreq(const Image& img) {
  const HaarBands b = haar_decompose(img);
  const int ch = img.channels();
  SubbandStack out{Image(b.lh.height(), b.lh.width(), 3 * ch), ch};
  for (int c = 0; c < ch; ++c) {
    std::copy(b.lh.plane(c).begin(), b.lh.plane(c).end(), out.bands.plane(c).begin());
    std::copy(b.hl.plane(c).begin(), b.hl.plane(c).end(), out.bands.plane(ch + c).begin());
    std::copy(b.hh.plane(c).begin(), b.hh.plane(c).end(), out.bands.plane(2 * ch + c).begin());
  }
  return out;
}

}  // namespace dasr
