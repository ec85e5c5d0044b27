#include <gtest/gtest.h>
#include <zlib.h>

#include <cstring>
#include <fstream>
#include <random>

#include "dasr/error.hpp"
#include "dasr/imaging/filter.hpp"
#include "dasr/imaging/resample.hpp"
#include "dasr/imaging/wavelet.hpp"
#include "dasr/nn/archive.hpp"
#include "dasr/nn/ops.hpp"
#include "test_support.hpp"

using namespace dasr;
using namespace dasr::nn;
using dasr::testing::finite_difference_check;
using dasr::testing::random_tensor;

namespace {

struct OpCase {
  std::vector<NamedParam> params;
  std::function<Var()> loss;
};

void expect_gradients(const OpCase& c, int samples = 60, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  const auto r = finite_difference_check(c.params, c.loss, samples, rng);
  EXPECT_EQ(r.failed, 0) << "worst relative error " << r.worst;
}

Var dot_loss(const Var& y, const Tensor& w) {
  // sum_i w_i * y_i, so the scalar loss is sensitive to every output element
  Tensor out({1, 1, 1, 1}, 0.0);
  for (std::size_t i = 0; i < w.numel(); ++i) out[0] += w[i] * y->value[i];
  return make_node(out, {y}, [w](Node& self) {
    Node& p = *self.parents[0];
    if (!p.requires_grad) return;
    Tensor& g = p.grad_buffer();
    const double s = self.grad[0];
    for (std::size_t i = 0; i < w.numel(); ++i) g[i] += s * w[i];
  });
}

Var rand_dot(const Var& y, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return dot_loss(y, random_tensor(rng, y->value.shape(), -1.0, 1.0));
}

}  // namespace

TEST(Tensor, StackAndUnstack) {
  std::mt19937_64 rng(1);
  std::vector<Image> imgs{dasr::testing::random_image(rng, 4, 5, 3), dasr::testing::random_image(rng, 4, 5, 3)};
  const Tensor t = stack_images(imgs);
  EXPECT_EQ(t.shape(), (Shape{2, 3, 4, 5}));
  EXPECT_EQ(t.at(1, 2, 3, 4), imgs[1].at(2, 3, 4));
  const auto back = unstack_images(t);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0], imgs[0]);
  EXPECT_EQ(back[1], imgs[1]);
  EXPECT_THROW(Tensor(Shape{1, 1, 2, 2}, std::vector<double>(3)), InvalidArgument);
}

TEST(Autograd, ConstantsCarryNoGraph) {
  const Var a = constant(Tensor({1, 1, 2, 2}, 1.0));
  const Var y = relu(a);
  EXPECT_FALSE(y->requires_grad);
  EXPECT_TRUE(y->parents.empty());
}

TEST(Autograd, LeafAccumulatesAcrossPasses) {
  const Var a = leaf(Tensor({1, 1, 1, 2}, std::vector<double>{1.0, -2.0}));
  backward(mean(scale(a, 3.0)));
  backward(mean(scale(a, 3.0)));
  EXPECT_DOUBLE_EQ(a->grad[0], 3.0);
  a->zero_grad();
  EXPECT_FALSE(a->has_grad);
}

TEST(OpGradients, Conv2dStridesAndPadding) {
  std::mt19937_64 rng(2);
  for (auto [stride, pad] : {std::pair{1, 1}, {2, 1}, {1, 0}, {2, 0}}) {
    const Var x = leaf(random_tensor(rng, {2, 3, 7, 6}, -1, 1));
    const Var w = leaf(random_tensor(rng, {4, 3, 3, 3}, -1, 1));
    const Var b = leaf(random_tensor(rng, {1, 4, 1, 1}, -1, 1));
    expect_gradients({{{"x", x}, {"w", w}, {"b", b}}, [=] { return rand_dot(conv2d(x, w, b, stride, pad), 7); }});
  }
}

TEST(OpGradients, Conv2dMatchesDirectSum) {
  std::mt19937_64 rng(3);
  const Tensor x = random_tensor(rng, {1, 2, 5, 5}, -1, 1);
  const Tensor w = random_tensor(rng, {3, 2, 3, 3}, -1, 1);
  const Tensor b = random_tensor(rng, {1, 3, 1, 1}, -1, 1);
  const Tensor y = conv2d(constant(x), constant(w), constant(b), 2, 1)->value;
  ASSERT_EQ(y.shape(), (Shape{1, 3, 3, 3}));
  for (int o = 0; o < 3; ++o)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double acc = b.at(0, o, 0, 0);
        for (int c = 0; c < 2; ++c)
          for (int ky = 0; ky < 3; ++ky)
            for (int kx = 0; kx < 3; ++kx) {
              const int yy = i * 2 - 1 + ky, xx = j * 2 - 1 + kx;
              if (yy < 0 || xx < 0 || yy >= 5 || xx >= 5) continue;
              acc += w.at(o, c, ky, kx) * x.at(0, c, yy, xx);
            }
        EXPECT_NEAR(y.at(0, o, i, j), acc, 1e-12);
      }
}

TEST(OpGradients, Pointwise) {
  std::mt19937_64 rng(4);
  const Var x = leaf(random_tensor(rng, {1, 2, 4, 4}, -1, 1));
  const Var y = leaf(random_tensor(rng, {1, 2, 4, 4}, -1, 1));
  expect_gradients({{{"x", x}}, [=] { return rand_dot(leaky_relu(x, 0.2), 1); }});
  expect_gradients({{{"x", x}}, [=] { return rand_dot(relu(x), 2); }});
  expect_gradients({{{"x", x}}, [=] { return rand_dot(sigmoid(x), 3); }});
  expect_gradients({{{"x", x}, {"y", y}}, [=] { return rand_dot(add(x, y), 4); }});
  expect_gradients({{{"x", x}, {"y", y}}, [=] { return rand_dot(sub(x, y), 5); }});
  expect_gradients({{{"x", x}, {"y", y}}, [=] { return rand_dot(add_scaled(x, y, 0.2), 6); }});
  expect_gradients({{{"x", x}, {"y", y}}, [=] { return rand_dot(concat_channels({x, y, x}), 7); }});
  const std::vector<double> m{0.4, 0.5}, s{0.2, 0.3};
  expect_gradients({{{"x", x}}, [=] { return rand_dot(normalize_channels(x, m, s), 8); }});
}

TEST(OpGradients, Resampling) {
  std::mt19937_64 rng(5);
  const Var x = leaf(random_tensor(rng, {2, 2, 6, 8}, -1, 1));
  expect_gradients({{{"x", x}}, [=] { return rand_dot(bilinear_resize(x, 3, 4), 1); }});
  expect_gradients({{{"x", x}}, [=] { return rand_dot(bilinear_resize(x, 11, 5), 2); }});
  expect_gradients({{{"x", x}}, [=] { return rand_dot(upsample_nearest(x, 2), 3); }});
  expect_gradients({{{"x", x}}, [=] { return rand_dot(max_pool2(x), 4); }});
  expect_gradients({{{"x", x}}, [=] { return rand_dot(haar_highfreq(x), 5); }});
  expect_gradients({{{"x", x}}, [=] { return rand_dot(gaussian_highfreq(x, 1.0), 6); }});
}

TEST(OpGradients, Losses) {
  std::mt19937_64 rng(6);
  const Var p = leaf(random_tensor(rng, {2, 3, 4, 4}));
  const Var t = constant(random_tensor(rng, {2, 3, 4, 4}));
  const Tensor w = random_tensor(rng, {2, 1, 4, 4});
  expect_gradients({{{"p", p}}, [=] { return weighted_l1(p, t); }});
  expect_gradients({{{"p", p}}, [=] { return weighted_l1(p, t, w); }});
  const Var l = leaf(random_tensor(rng, {2, 1, 3, 3}, -3, 3));
  expect_gradients({{{"l", l}}, [=] { return mean_log_one_minus_prob(l, 1e-6); }});
  expect_gradients({{{"l", l}}, [=] { return mean_log_prob(l, 1e-6); }});
  expect_gradients({{{"l", l}, {"p", p}}, [=] {
                      return sum_scalars({{0.3, mean(l)}, {-2.0, weighted_l1(p, t)}});
                    }});
}

TEST(Ops, ForwardMatchesImagingReferences) {
  std::mt19937_64 rng(7);
  const Image img = dasr::testing::random_image(rng, 8, 6, 3);
  const Tensor x = image_tensor(img);
  EXPECT_EQ(tensor_image(haar_highfreq(constant(x))->value), wavelet_highfreq(img).bands);
  const Image g = tensor_image(gaussian_highfreq(constant(x), 1.2)->value);
  EXPECT_LE(dasr::testing::max_abs_diff(g, dasr::gaussian_highfreq(img, 1.2)), 1e-14);
  const Image b = tensor_image(nn::bilinear_resize(constant(x), 5, 9)->value);
  EXPECT_LE(dasr::testing::max_abs_diff(b, dasr::bilinear_resize(img, 5, 9)), 1e-14);
  EXPECT_EQ(nn::bilinear_resize(constant(x), 8, 6)->value, x);
}

TEST(Ops, ClampedScoresHaveZeroGradient) {
  const Var l = leaf(Tensor({1, 1, 1, 2}, std::vector<double>{40.0, 0.0}));
  const Var loss = mean_log_one_minus_prob(l, 1e-6);
  EXPECT_NEAR(loss->value.item(), 0.5 * (std::log(1e-6) + std::log(0.5)), 1e-9);
  backward(loss);
  EXPECT_EQ(l->grad[0], 0.0);
  EXPECT_NEAR(l->grad[1], -0.25, 1e-12);
}

TEST(Ops, ShapeErrors) {
  const Var a = constant(Tensor({1, 2, 4, 4}, 0.0));
  const Var b = constant(Tensor({1, 2, 4, 5}, 0.0));
  EXPECT_THROW(add(a, b), InvalidArgument);
  EXPECT_THROW(weighted_l1(a, b), InvalidArgument);
  EXPECT_THROW(haar_highfreq(constant(Tensor({1, 1, 3, 4}, 0.0))), InvalidArgument);
  EXPECT_THROW(conv2d(a, constant(Tensor({3, 5, 3, 3}, 0.0)), nullptr, 1, 1), InvalidArgument);
}

namespace {

TensorArchive sample_archive() {
  std::mt19937_64 rng(9);
  TensorArchive a;
  a.phase = 2;
  a.iteration = 1234567890123ull;
  a.metadata = R"({"k": "v"})";
  a.tensors.emplace_back("w.weight", random_tensor(rng, {4, 3, 3, 3}, -1, 1));
  a.tensors.emplace_back("w.bias", random_tensor(rng, {1, 4, 1, 1}, -1, 1));
  return a;
}

}  // namespace

TEST(Archive, RoundTripIsBitwise) {
  dasr::testing::TempDir dir;
  const TensorArchive a = sample_archive();
  write_archive(a, dir / "a.dasr");
  const TensorArchive b = read_archive(dir / "a.dasr");
  EXPECT_EQ(b.phase, a.phase);
  EXPECT_EQ(b.iteration, a.iteration);
  EXPECT_EQ(b.metadata, a.metadata);
  ASSERT_EQ(b.tensors.size(), 2u);
  EXPECT_EQ(b.tensors[0].first, "w.weight");
  EXPECT_EQ(b.get("w.weight"), a.get("w.weight"));
  EXPECT_EQ(b.get("w.bias"), a.get("w.bias"));
  EXPECT_EQ(b.find("nope"), nullptr);
  EXPECT_THROW(b.get("nope"), FormatError);
}

TEST(Archive, LayoutHeader) {
  const auto bytes = serialize_archive(sample_archive());
  EXPECT_EQ(std::memcmp(bytes.data(), "DASRCKPT", 8), 0);
  std::uint32_t version;
  std::memcpy(&version, bytes.data() + 8, 4);
  EXPECT_EQ(version, TensorArchive::kVersion);
  std::uint32_t crc;
  std::memcpy(&crc, bytes.data() + bytes.size() - 4, 4);
  EXPECT_EQ(crc, crc32(0L, bytes.data(), static_cast<uInt>(bytes.size() - 4)));
}

TEST(Archive, TruncationIsAChecksumError) {
  const auto bytes = serialize_archive(sample_archive());
  for (std::size_t cut : {bytes.size() - 1, bytes.size() / 2, std::size_t{20}, std::size_t{5}}) {
    std::vector<unsigned char> t(bytes.begin(), bytes.begin() + static_cast<long>(cut));
    EXPECT_THROW(deserialize_archive(t), ChecksumError) << cut;
  }
  auto flipped = bytes;
  flipped[bytes.size() / 2] ^= 0x40;
  EXPECT_THROW(deserialize_archive(flipped), ChecksumError);
}

TEST(Archive, VersionMismatch) {
  auto bytes = serialize_archive(sample_archive());
  const std::uint32_t v = TensorArchive::kVersion + 1;
  std::memcpy(bytes.data() + 8, &v, 4);
  const std::uint32_t crc = crc32(0L, bytes.data(), static_cast<uInt>(bytes.size() - 4));
  std::memcpy(bytes.data() + bytes.size() - 4, &crc, 4);
  try {
    deserialize_archive(bytes);
    FAIL() << "expected a version error";
  } catch (const ChecksumError&) {
    FAIL() << "version mismatch misreported as corruption";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("version"), std::string::npos);
  }
}

TEST(Archive, MissingFileAndBadMagic) {
  dasr::testing::TempDir dir;
  EXPECT_THROW(read_archive(dir / "none.dasr"), IoError);
  std::ofstream(dir / "junk.dasr") << "NOTACKPT plus some padding bytes";
  EXPECT_THROW(read_archive(dir / "junk.dasr"), FormatError);
}
