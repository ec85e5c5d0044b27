#include "dasr/nn/autograd.hpp"

#include <unordered_set>

#include "dasr/error.hpp"

namespace dasr::nn {

Tensor& Node::grad_buffer() {
  if (grad.shape() != value.shape() || grad.numel() != value.numel())
    grad = Tensor(value.shape(), 0.0);
  has_grad = true;
  return grad;
}

void Node::zero_grad() {
  if (!grad.empty()) grad.fill(0.0);
  has_grad = false;
}

Var constant(Tensor value) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  return n;
}

Var leaf(Tensor value, bool requires_grad) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  n->requires_grad = requires_grad;
  return n;
}

Var detach(const Var& v) { return constant(v->value); }

Var make_node(Tensor value, std::vector<Var> parents, std::function<void(Node&)> backward_fn) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  for (const Var& p : parents) n->requires_grad = n->requires_grad || p->requires_grad;
  if (n->requires_grad) {
    n->parents = std::move(parents);
    n->backward = std::move(backward_fn);
  }
  return n;
}

void backward(const Var& scalar) {
  DASR_REQUIRE(scalar->value.numel() == 1, "backward() needs a scalar output");
  if (!scalar->requires_grad) return;

  // Iterative post-order DFS; deep networks would overflow a recursive walk.
  std::vector<Node*> order;
  std::unordered_set<Node*> seen;
  std::vector<std::pair<Node*, std::size_t>> stack{{scalar.get(), 0}};
  seen.insert(scalar.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node* p = node->parents[next++].get();
      if (p->requires_grad && seen.insert(p).second) stack.push_back({p, 0});
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  scalar->grad_buffer()[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    if (n->backward && n->has_grad) n->backward(*n);
  }
  // Intermediate gradients are not needed after the pass; leaves keep theirs.
  for (Node* n : order)
    if (n->backward) n->grad = Tensor();
}

}  // namespace dasr::nn
