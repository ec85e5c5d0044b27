#include <algorithm>

#include "dasr/data/pseudo_pairs.hpp"
#include "dasr/error.hpp"

namespace dasr::data {

CropDraw draw_crop(std::mt19937_64& rng, const std::vector<Image>& images, int patch, int align,
                   bool flip) {
  DASR_REQUIRE(!images.empty(), "draw_crop: no images");
  DASR_REQUIRE(patch >= 1 && align >= 1 && patch % align == 0,
               "draw_crop: patch must be a positive multiple of the alignment");
  CropDraw d{};
  d.index = std::uniform_int_distribution<int>(0, static_cast<int>(images.size()) - 1)(rng);
  const Image& img = images[d.index];
  if (img.height() < patch || img.width() < patch)
    throw InvalidArgument("draw_crop: image " + std::to_string(d.index) + " (" +
                          std::to_string(img.height()) + "x" + std::to_string(img.width()) +
                          ") smaller than patch " + std::to_string(patch));
  d.y = align * std::uniform_int_distribution<int>(0, (img.height() - patch) / align)(rng);
  d.x = align * std::uniform_int_distribution<int>(0, (img.width() - patch) / align)(rng);
  d.flip = flip && std::bernoulli_distribution(0.5)(rng);
  return d;
}

namespace {

void put(nn::Tensor& t, int n, const Image& img) {
  std::copy(img.values().begin(), img.values().end(), t.data() + t.offset(n, 0, 0, 0));
}

}  // namespace

nn::Tensor sample_crops(const std::vector<Image>& images, std::mt19937_64& rng, int patch,
                        int batch, int align, bool flip) {
  DASR_REQUIRE(batch >= 1, "sample_crops: batch must be >= 1");
  nn::Tensor out({batch, images.front().channels(), patch, patch});
  for (int b = 0; b < batch; ++b) {
    const CropDraw d = draw_crop(rng, images, patch, align, flip);
    Image crop = images[d.index].crop(d.y, d.x, patch, patch);
    if (d.flip) crop = crop.flipped_horizontal();
    DASR_REQUIRE(crop.channels() == out.shape().c, "sample_crops: mixed channel counts");
    put(out, b, crop);
  }
  return out;
}

PairBatch sample_training_batch(const PseudoPairSet& source, std::mt19937_64& rng, int patch_hr,
                                int batch, bool flip) {
  DASR_REQUIRE(!source.pairs.empty(), "sample_training_batch: empty source");
  DASR_REQUIRE(batch >= 1, "sample_training_batch: batch must be >= 1");
  const int s = source.scale;
  DASR_REQUIRE(patch_hr % s == 0, "sample_training_batch: patch must be divisible by scale");
  const int patch_lr = patch_hr / s;
  const int ch = source.pairs.front().x_r.channels();
  PairBatch out{nn::Tensor({batch, ch, patch_lr, patch_lr}), nn::Tensor({batch, ch, patch_hr, patch_hr}),
                nn::Tensor({batch, 1, patch_hr, patch_hr})};
  for (int b = 0; b < batch; ++b) {
    const int idx = std::uniform_int_distribution<int>(0, static_cast<int>(source.pairs.size()) - 1)(rng);
    const PseudoPair& p = source.pairs[idx];
    if (p.x_r.height() < patch_hr || p.x_r.width() < patch_hr)
      throw InvalidArgument("sample_training_batch: pair " + p.name + " smaller than patch");
    const int y = s * std::uniform_int_distribution<int>(0, (p.x_r.height() - patch_hr) / s)(rng);
    const int x = s * std::uniform_int_distribution<int>(0, (p.x_r.width() - patch_hr) / s)(rng);
    const bool f = flip && std::bernoulli_distribution(0.5)(rng);
    Image hr = p.x_r.crop(y, x, patch_hr, patch_hr);
    Image lr = p.y_g.crop(y / s, x / s, patch_lr, patch_lr);
    Image w = p.w.crop(y, x, patch_hr, patch_hr);
    if (f) {
      hr = hr.flipped_horizontal();
      lr = lr.flipped_horizontal();
      w = w.flipped_horizontal();
    }
    put(out.hr, b, hr);
    put(out.lr, b, lr);
    put(out.weight, b, w);
  }
  return out;
}

}  // namespace dasr::data
