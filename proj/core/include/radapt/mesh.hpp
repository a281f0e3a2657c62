#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

#include "radapt/autodiff.hpp"

namespace radapt {

/// Raised when every trainable coordinate of an axis collapses to one value,
/// which leaves the rescaling step undefined for that training step.
struct degenerate_axis_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// psi values that rescale to a uniform grid: (1, 2, ..., n_delta + 2).
std::vector<double> init_uniform(int n_delta);

/// One-dimensional coordinate vector: sort psi, rescale it affinely onto
/// [a, b], then merge the fixed interior coordinates and sort again. The
/// result has length psi.size() + fixed.size(), starts at a, ends at b, and
/// is non-decreasing. Fixed coordinates (and the two endpoints) carry zero
/// gradient; interior entries stay differentiable in every psi component.
std::vector<ad::Var> build_axis(ad::Tape& tape, std::span<const ad::Var> psi, double a, double b,
                                std::span<const double> fixed = {});

/// Tensor-product mesh over 1 or 2 built axes. Nodes are enumerated
/// row-major with the last axis fastest; elements likewise.
struct TensorMesh {
  int dim = 0;
  std::array<std::vector<ad::Var>, 2> axes;

  int axis_size(int d) const { return static_cast<int>(axes[static_cast<std::size_t>(d)].size()); }
  long node_count() const {
    long n = 1;
    for (int d = 0; d < dim; ++d) n *= axis_size(d);
    return n;
  }
  long element_count() const {
    long n = 1;
    for (int d = 0; d < dim; ++d) n *= axis_size(d) - 1;
    return n;
  }

  long node_index(int i0, int i1 = 0) const {
    return dim == 1 ? i0 : static_cast<long>(i0) * axis_size(1) + i1;
  }
  long element_index(int e0, int e1 = 0) const {
    return dim == 1 ? e0 : static_cast<long>(e0) * (axis_size(1) - 1) + e1;
  }
  std::array<int, 2> element_coords(long e) const {
    if (dim == 1) return {static_cast<int>(e), 0};
    const int ny = axis_size(1) - 1;
    return {static_cast<int>(e / ny), static_cast<int>(e % ny)};
  }
};

TensorMesh build_mesh(std::vector<std::vector<ad::Var>> axes);

/// Corner coordinates and volume of one element, as plain values.
struct ElementGeometry {
  std::array<double, 2> lo{}, hi{};
  double volume = 0.0;
  std::array<double, 2> midpoint() const {
    return {0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])};
  }
};

ElementGeometry element_geometry(const TensorMesh& mesh, long element);

/// Axis coordinates as plain values (for serialization and diagnostics).
std::vector<double> axis_values(std::span<const ad::Var> axis);

}  // namespace radapt
