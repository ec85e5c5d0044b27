#include "dasr/training/adam.hpp"

#include <cmath>

#include "dasr/error.hpp"

namespace dasr::training {

Adam::Adam(std::vector<nn::NamedParam> params, AdamOptions options)
    : params_(std::move(params)), opt_(options) {
  for (const auto& p : params_) {
    m_.emplace_back(p.var->value.shape(), 0.0);
    v_.emplace_back(p.var->value.shape(), 0.0);
  }
}

void Adam::step(double lr) {
  ++t_;
  const double bc1 = 1.0 - std::pow(opt_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(opt_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    nn::Node& p = *params_[i].var;
    if (!p.has_grad) continue;
    double* w = p.value.data();
    const double* g = p.grad.data();
    double* m = m_[i].data();
    double* v = v_[i].data();
    for (std::size_t k = 0; k < p.value.numel(); ++k) {
      m[k] = opt_.beta1 * m[k] + (1.0 - opt_.beta1) * g[k];
      v[k] = opt_.beta2 * v[k] + (1.0 - opt_.beta2) * g[k] * g[k];
      w[k] -= lr * (m[k] / bc1) / (std::sqrt(v[k] / bc2) + opt_.eps);
    }
  }
}

void Adam::zero_grad() {
  for (auto& p : params_) p.var->zero_grad();
}

std::vector<std::pair<std::string, nn::Tensor>> Adam::state(const std::string& prefix) const {
  std::vector<std::pair<std::string, nn::Tensor>> out;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    out.emplace_back(prefix + "m." + params_[i].name, m_[i]);
    out.emplace_back(prefix + "v." + params_[i].name, v_[i]);
  }
  return out;
}

void Adam::load_state(const std::vector<std::pair<std::string, nn::Tensor>>& tensors,
                      const std::string& prefix, std::uint64_t steps) {
  auto find = [&](const std::string& name) -> const nn::Tensor& {
    for (const auto& [n, t] : tensors)
      if (n == name) return t;
    throw FormatError("optimizer state missing " + name);
  };
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const nn::Tensor& m = find(prefix + "m." + params_[i].name);
    const nn::Tensor& v = find(prefix + "v." + params_[i].name);
    if (!(m.shape() == m_[i].shape()) || !(v.shape() == v_[i].shape()))
      throw FormatError("optimizer state shape mismatch for " + params_[i].name);
    m_[i] = m;
    v_[i] = v;
  }
  t_ = steps;
}

}  // namespace dasr::training
