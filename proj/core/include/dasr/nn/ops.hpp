#pragma once

#include <span>
#include <vector>

#include "dasr/nn/autograd.hpp"

namespace dasr::nn {

// weight: (out, in, k, k); bias: (1, out, 1, 1) or null.
Var conv2d(const Var& x, const Var& weight, const Var& bias, int stride, int pad);

Var relu(const Var& x);
Var leaky_relu(const Var& x, double slope);
Var sigmoid(const Var& x);

Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var scale(const Var& x, double s);
// a + s * b
Var add_scaled(const Var& a, const Var& b, double s);
Var concat_channels(const std::vector<Var>& xs);

// Per-channel affine (x - mean[c]) / stddev[c].
Var normalize_channels(const Var& x, std::span<const double> mean, std::span<const double> stddev);

// Corner-aligned bilinear resize; identity when the size is unchanged.
Var bilinear_resize(const Var& x, int out_h, int out_w);
Var upsample_nearest(const Var& x, int factor);
Var max_pool2(const Var& x);

// Band-major LH/HL/HH stack at half resolution (3C channels).
Var haar_highfreq(const Var& x);
// x - gaussian_blur(x), reflect-101 borders.
Var gaussian_highfreq(const Var& x, double sigma);

// Scalar reductions. Outputs have shape (1, 1, 1, 1).
Var mean(const Var& x);
Var sum_scalars(const std::vector<std::pair<double, Var>>& terms);

// mean |w * (pred - target)|; weight (N, 1, H, W) broadcast over channels, or
// empty for unit weights.
Var weighted_l1(const Var& pred, const Var& target, const Tensor& weight = {});

// mean log(1 - clamp(sigmoid(logits))) and mean log(clamp(sigmoid(logits)))
// with clamp to [eps, 1 - eps]. Gradient is zero where the clamp is active.
Var mean_log_one_minus_prob(const Var& logits, double eps);
Var mean_log_prob(const Var& logits, double eps);

}  // namespace dasr::nn
