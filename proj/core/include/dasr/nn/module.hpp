#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dasr/nn/autograd.hpp"
#include "dasr/nn/ops.hpp"

namespace dasr::nn {

struct NamedParam {
  std::string name;
  Var var;
};

struct Conv2d {
  Var weight;
  Var bias;
  int stride = 1;
  int pad = 1;

  Var operator()(const Var& x) const { return conv2d(x, weight, bias, stride, pad); }
};

// Base for every network: owns an ordered, named parameter list.
class Module {
 public:
  virtual ~Module() = default;
  Module() = default;
  Module(const Module&) = delete;
  Module& operator=(const Module&) = delete;

  virtual Var forward(const Var& x) = 0;
  Tensor infer(const Tensor& x);

  const std::vector<NamedParam>& parameters() const { return params_; }
  std::size_t parameter_count() const;
  void set_trainable(bool trainable);
  bool trainable() const { return trainable_; }
  void zero_grad();
  double grad_norm() const;

  // Copies values from another module with identical names and shapes.
  void copy_parameters_from(const Module& other);

 protected:
  // Kaiming fan-in normal init for weights scaled by `gain`, zero bias.
  Conv2d make_conv(const std::string& name, int in, int out, int kernel, int stride, int pad,
                   std::mt19937_64& rng, double gain = 1.0);
  Var add_parameter(const std::string& name, Tensor value);

 private:
  std::vector<NamedParam> params_;
  bool trainable_ = true;
};

}  // namespace dasr::nn
