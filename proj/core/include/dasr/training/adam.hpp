#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dasr/nn/module.hpp"

namespace dasr::training {

struct AdamOptions {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Parameters that received no gradient in the last backward pass are left
// untouched, moments included.
class Adam {
 public:
  Adam(std::vector<nn::NamedParam> params, AdamOptions options = {});

  void step(double lr);
  void zero_grad();

  std::uint64_t steps() const { return t_; }
  // Moments as "<prefix>m.<name>" / "<prefix>v.<name>".
  std::vector<std::pair<std::string, nn::Tensor>> state(const std::string& prefix) const;
  void load_state(const std::vector<std::pair<std::string, nn::Tensor>>& tensors,
                  const std::string& prefix, std::uint64_t steps);

 private:
  std::vector<nn::NamedParam> params_;
  std::vector<nn::Tensor> m_;
  std::vector<nn::Tensor> v_;
  AdamOptions opt_;
  std::uint64_t t_ = 0;
};

}  // namespace dasr::training
