#pragma once

#include <vector>

#include "dasr/imaging/image.hpp"

namespace dasr {

// Reflect-101 border: ... 2 1 | 0 1 2 ... n-1 | n-2 ...
int reflect_index(int i, int n);

// Normalized 1-D Gaussian, radius ceil(3 * sigma), length 2 * radius + 1.
std::vector<double> gaussian_kernel(double sigma);

Image gaussian_blur(const Image& img, double sigma);

// img - gaussian_blur(img, sigma).
Image gaussian_highfreq(const Image& img, double sigma);

}  // namespace dasr
