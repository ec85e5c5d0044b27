#include "dasr/nn/module.hpp"

#include <cmath>
#include <unordered_map>

#include "dasr/error.hpp"

namespace dasr::nn {

Tensor Module::infer(const Tensor& x) { return forward(constant(x))->value; }

std::size_t Module::parameter_count() const {
  std::size_t total = 0;
  for (const auto& p : params_) total += p.var->value.numel();
  return total;
}

void Module::set_trainable(bool trainable) {
  trainable_ = trainable;
  for (auto& p : params_) p.var->requires_grad = trainable;
}

void Module::zero_grad() {
  for (auto& p : params_) p.var->zero_grad();
}

double Module::grad_norm() const {
  double acc = 0.0;
  for (const auto& p : params_)
    if (p.var->has_grad)
      for (double g : p.var->grad.values()) acc += g * g;
  return std::sqrt(acc);
}

void Module::copy_parameters_from(const Module& other) {
  std::unordered_map<std::string, const Var*> src;
  for (const auto& p : other.params_) src[p.name] = &p.var;
  for (auto& p : params_) {
    auto it = src.find(p.name);
    if (it == src.end()) throw InvalidArgument("copy_parameters_from: missing " + p.name);
    if (!((*it->second)->value.shape() == p.var->value.shape()))
      throw InvalidArgument("copy_parameters_from: shape mismatch for " + p.name);
    p.var->value = (*it->second)->value;
  }
}

Var Module::add_parameter(const std::string& name, Tensor value) {
  for (const auto& p : params_)
    DASR_REQUIRE(p.name != name, "duplicate parameter name " + name);
  Var v = leaf(std::move(value), trainable_);
  params_.push_back({name, v});
  return v;
}

Conv2d Module::make_conv(const std::string& name, int in, int out, int kernel, int stride, int pad,
                         std::mt19937_64& rng, double gain) {
  DASR_REQUIRE(in >= 1 && out >= 1 && kernel >= 1 && stride >= 1 && pad >= 0,
               "invalid conv geometry for " + name);
  Tensor w({out, in, kernel, kernel});
  const double stddev = gain * std::sqrt(2.0 / (static_cast<double>(in) * kernel * kernel));
  std::normal_distribution<double> dist(0.0, stddev);
  for (double& v : w.values()) v = dist(rng);
  Conv2d conv;
  conv.weight = add_parameter(name + ".weight", std::move(w));
  conv.bias = add_parameter(name + ".bias", Tensor({1, out, 1, 1}, 0.0));
  conv.stride = stride;
  conv.pad = pad;
  return conv;
}

}  // namespace dasr::nn
