#include "radapt/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace radapt {

Network Network::dense(int input_dim, int hidden_layers, int neurons) {
  if (input_dim < 1 || hidden_layers < 0 || neurons < 1)
    throw std::invalid_argument("Network::dense: bad architecture");
  Network net;
  net.input_dim = input_dim;
  net.widths.assign(static_cast<std::size_t>(hidden_layers), neurons);
  net.widths.push_back(1);
  return net;
}

std::size_t Network::param_count() const {
  std::size_t count = 0;
  int in = input_dim;
  for (int out : widths) {
    count += static_cast<std::size_t>(out) * (static_cast<std::size_t>(in) + 1);
    in = out;
  }
  return count;
}

std::vector<double> Network::init_params(std::uint64_t seed) const {
  std::vector<double> params;
  params.reserve(param_count());
  std::mt19937_64 rng(seed);
  int in = input_dim;
  for (int out : widths) {
    const double s = std::sqrt(6.0 / (in + out));
    std::uniform_real_distribution<double> dist(-s, s);
    for (int i = 0; i < out * in; ++i) params.push_back(dist(rng));
    for (int i = 0; i < out; ++i) params.push_back(0.0);  // biases
    in = out;
  }
  return params;
}

ad::Var nn_forward(const Network& net, std::span<const ad::Var> theta,
                   std::span<const ad::Var> point) {
  if (static_cast<int>(point.size()) != net.input_dim)
    throw std::invalid_argument("nn_forward: point dimension does not match the input width");
  if (theta.size() != net.param_count())
    throw std::invalid_argument("nn_forward: parameter vector size mismatch");

  std::vector<ad::Var> cur(point.begin(), point.end());
  std::vector<ad::Var> next;
  std::size_t p = 0;
  for (std::size_t layer = 0; layer < net.widths.size(); ++layer) {
    const int out = net.widths[layer];
    const std::size_t in = cur.size();
    const bool last = layer + 1 == net.widths.size();
    next.clear();
    next.reserve(static_cast<std::size_t>(out));
    const std::size_t bias_base = p + static_cast<std::size_t>(out) * in;
    for (int j = 0; j < out; ++j) {
      ad::Var z = theta[bias_base + static_cast<std::size_t>(j)];
      const std::size_t row = p + static_cast<std::size_t>(j) * in;
      for (std::size_t k = 0; k < in; ++k) z += theta[row + k] * cur[k];
      next.push_back(last ? z : ad::sigmoid(z));
    }
    p = bias_base + static_cast<std::size_t>(out);
    cur.swap(next);
  }
  return cur.front();
}

std::vector<ad::Var> nn_at_nodes(const Network& net, std::span<const ad::Var> theta,
                                 const TensorMesh& mesh) {
  std::vector<ad::Var> out;
  out.reserve(static_cast<std::size_t>(mesh.node_count()));
  if (mesh.dim == 1) {
    for (const ad::Var& x : mesh.axes[0]) {
      const ad::Var pt[] = {x};
      out.push_back(nn_forward(net, theta, pt));
    }
  } else {
    for (const ad::Var& x : mesh.axes[0])
      for (const ad::Var& y : mesh.axes[1]) {
        const ad::Var pt[] = {x, y};
        out.push_back(nn_forward(net, theta, pt));
      }
  }
  return out;
}

std::vector<ad::Var> apply_lift(const TensorMesh& mesh, const Field& phi_d, const Field* u_d,
                                std::span<const ad::Var> raw) {
  if (raw.size() != static_cast<std::size_t>(mesh.node_count()))
    throw std::invalid_argument("apply_lift: one raw value per mesh node required");
  ad::Tape& tape = *mesh.axes[0].front().tape();
  ad::Var zero = tape.constant(0.0);

  std::vector<ad::Var> out;
  out.reserve(raw.size());
  std::size_t idx = 0;
  for (int i0 = 0; i0 < mesh.axis_size(0); ++i0) {
    const ad::Var& x = mesh.axes[0][static_cast<std::size_t>(i0)];
    if (mesh.dim == 1) {
      ad::Var v = phi_d.record(x, zero) * raw[idx];
      if (u_d) v += u_d->record(x, zero);
      out.push_back(v);
      ++idx;
    } else {
      for (int i1 = 0; i1 < mesh.axis_size(1); ++i1) {
        const ad::Var& y = mesh.axes[1][static_cast<std::size_t>(i1)];
        ad::Var v = phi_d.record(x, y) * raw[idx];
        if (u_d) v += u_d->record(x, y);
        out.push_back(v);
        ++idx;
      }
    }
  }
  return out;
}

namespace {

// Element index and local coordinate in [0, 1] for a query along one axis.
std::pair<int, double> locate(const std::vector<double>& c, double x) {
  const int n = static_cast<int>(c.size());
  if (x < c.front() || x > c.back())
    throw std::invalid_argument("Snapshot::evaluate: point outside the domain box");
  int i = static_cast<int>(std::upper_bound(c.begin(), c.end(), x) - c.begin()) - 1;
  i = std::clamp(i, 0, n - 2);
  const double h = c[static_cast<std::size_t>(i) + 1] - c[static_cast<std::size_t>(i)];
  const double t = h > 0.0 ? (x - c[static_cast<std::size_t>(i)]) / h : 0.0;
  return {i, t};
}

}  // namespace

double Snapshot::evaluate(double x, double y) const {
  const auto [i, t] = locate(axes[0], x);
  if (dim == 1) {
    return (1.0 - t) * nodal[static_cast<std::size_t>(i)] +
           t * nodal[static_cast<std::size_t>(i) + 1];
  }
  const auto [j, s] = locate(axes[1], y);
  const std::size_t ny = axes[1].size();
  const auto at = [&](int a, int b) {
    return nodal[static_cast<std::size_t>(a) * ny + static_cast<std::size_t>(b)];
  };
  return (1.0 - t) * ((1.0 - s) * at(i, j) + s * at(i, j + 1)) +
         t * ((1.0 - s) * at(i + 1, j) + s * at(i + 1, j + 1));
}

double Snapshot::slope(int e) const {
  if (dim != 1) throw std::logic_error("Snapshot::slope: 1D only");
  const double h = axes[0][static_cast<std::size_t>(e) + 1] - axes[0][static_cast<std::size_t>(e)];
  if (h == 0.0) throw std::invalid_argument("Snapshot::slope: zero-length element");
  return (nodal[static_cast<std::size_t>(e) + 1] - nodal[static_cast<std::size_t>(e)]) / h;
}

Snapshot snapshot_from(const TensorMesh& mesh, std::span<const ad::Var> nodal) {
  Snapshot s;
  s.dim = mesh.dim;
  for (int d = 0; d < mesh.dim; ++d)
    s.axes[static_cast<std::size_t>(d)] = axis_values(mesh.axes[static_cast<std::size_t>(d)]);
  s.nodal.reserve(nodal.size());
  for (const ad::Var& v : nodal) s.nodal.push_back(v.value());
  return s;
}

}  // namespace radapt
