#include "radapt/autodiff.hpp"

namespace radapt::ad {

Gradient Tape::backward(const Var& output) const {
  check(output);
  std::vector<double> adj(nodes_.size(), 0.0);
  adj[static_cast<std::size_t>(output.idx_)] = 1.0;
  for (std::int32_t i = output.idx_; i >= 0; --i) {
    const double g = adj[static_cast<std::size_t>(i)];
    if (g == 0.0) continue;
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    if (n.a >= 0) adj[static_cast<std::size_t>(n.a)] += n.da * g;
    if (n.b >= 0) adj[static_cast<std::size_t>(n.b)] += n.db * g;
  }
  return Gradient(this, std::move(adj));
}

std::vector<double> Tape::replay() const {
  std::vector<double> v(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    const auto a = [&] { return v[static_cast<std::size_t>(n.a)]; };
    const auto b = [&] { return v[static_cast<std::size_t>(n.b)]; };
    switch (n.op) {
      case Op::leaf:
      case Op::constant: v[i] = vals_[i]; break;
      case Op::add: v[i] = a() + b(); break;
      case Op::sub: v[i] = a() - b(); break;
      case Op::mul: v[i] = a() * b(); break;
      case Op::div: v[i] = a() / b(); break;
      case Op::atan2v: v[i] = std::atan2(a(), b()); break;
      case Op::neg: v[i] = -a(); break;
      case Op::absv: v[i] = std::abs(a()); break;
      case Op::sqrtv: v[i] = std::sqrt(a()); break;
      case Op::expv: v[i] = std::exp(a()); break;
      case Op::logv: v[i] = std::log(a()); break;
      case Op::sinv: v[i] = std::sin(a()); break;
      case Op::cosv: v[i] = std::cos(a()); break;
      case Op::atanv: v[i] = std::atan(a()); break;
      case Op::sigmoidv: v[i] = 1.0 / (1.0 + std::exp(-a())); break;
      case Op::add_c: v[i] = a() + n.db; break;
      case Op::rsub_c: v[i] = n.db - a(); break;
      case Op::mul_c: v[i] = a() * n.db; break;
      case Op::rdiv_c: v[i] = n.db / a(); break;
      case Op::pow_c: v[i] = std::pow(a(), n.db); break;
    }
  }
  return v;
}

}  // namespace radapt::ad
