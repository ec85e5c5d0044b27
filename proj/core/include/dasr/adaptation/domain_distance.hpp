#pragma once

#include <filesystem>

#include "dasr/imaging/image.hpp"
#include "dasr/models/networks.hpp"

namespace dasr::adaptation {

// sigmoid(D(separate(y_g))) on the discriminator's score grid.
Image score_map(models::Critic& critic, const Image& y_g);

// Score map bilinearly resized to (hr_h, hr_w), single channel, values in
// (0, 1). Larger means closer to the real-LR domain. `floor` > 0 applies
// w <- max(w, floor).
Image domain_distance_map(models::Critic& critic, const Image& y_g, int hr_h, int hr_w,
                          double floor = 0.0);

// Lossless sidecar: "DWMF", u32 version, u32 height, u32 width, f64 values.
void save_weight_sidecar(const Image& w, const std::filesystem::path& path);
Image load_weight_sidecar(const std::filesystem::path& path);

}  // namespace dasr::adaptation
