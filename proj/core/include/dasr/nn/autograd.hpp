#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "dasr/nn/tensor.hpp"

namespace dasr::nn {

// A value in the differentiation graph. Intermediate nodes own their inputs
// through `parents`; backward closures receive the node itself so there are
// no ownership cycles.
struct Node {
  Tensor value;
  Tensor grad;
  bool requires_grad = false;
  bool has_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward;

  // Lazily allocates and returns the gradient buffer.
  Tensor& grad_buffer();
  void zero_grad();
};

using Var = std::shared_ptr<Node>;

Var constant(Tensor value);
// Leaf that accumulates gradients across backward passes until zero_grad().
Var leaf(Tensor value, bool requires_grad = true);
Var detach(const Var& v);

// Creates an op node; requires_grad is inherited from any parent.
Var make_node(Tensor value, std::vector<Var> parents, std::function<void(Node&)> backward);

// Reverse pass from a scalar. Accumulates into every reachable node that
// requires gradients.
void backward(const Var& scalar);

}  // namespace dasr::nn
