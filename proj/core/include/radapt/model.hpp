#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "radapt/autodiff.hpp"
#include "radapt/fields.hpp"
#include "radapt/mesh.hpp"

namespace radapt {

/// Feed-forward layer stack: sigmoid activations on every layer except the
/// last, which is the identity. Parameters are stored externally as one
/// flat vector laid out layer by layer (row-major weights, then biases).
struct Network {
  int input_dim = 1;
  std::vector<int> widths;  // output width per layer; the last entry is 1

  static Network dense(int input_dim, int hidden_layers, int neurons);

  std::size_t param_count() const;

  /// Symmetric fan-based uniform weights, zero biases, fixed seed.
  std::vector<double> init_params(std::uint64_t seed) const;
};

/// Evaluates the network at one point, recording on the point's tape.
ad::Var nn_forward(const Network& net, std::span<const ad::Var> theta,
                   std::span<const ad::Var> point);

/// Network output at every mesh node, row-major (last axis fastest).
std::vector<ad::Var> nn_at_nodes(const Network& net, std::span<const ad::Var> theta,
                                 const TensorMesh& mesh);

/// Dirichlet lift: value at each node becomes u_D(x) + phi_D(x) * raw(x).
/// u_d may be null (homogeneous data, the only case the experiments use).
std::vector<ad::Var> apply_lift(const TensorMesh& mesh, const Field& phi_d, const Field* u_d,
                                std::span<const ad::Var> raw);

/// Frozen piecewise-multilinear solution: axis coordinates plus nodal
/// values as plain doubles. Continuous, multilinear within each element.
struct Snapshot {
  int dim = 1;
  std::array<std::vector<double>, 2> axes;
  std::vector<double> nodal;  // row-major, last axis fastest

  long node_count() const {
    long n = 1;
    for (int d = 0; d < dim; ++d) n *= static_cast<long>(axes[static_cast<std::size_t>(d)].size());
    return n;
  }

  /// Multilinear interpolation at a point inside the domain box.
  double evaluate(double x, double y = 0.0) const;

  /// 1D only: the (constant) slope over element e; requires nonzero length.
  double slope(int e) const;
};

Snapshot snapshot_from(const TensorMesh& mesh, std::span<const ad::Var> nodal);

}  // namespace radapt
