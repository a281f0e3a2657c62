#include "radapt/mesh.hpp"

#include <algorithm>
#include <string>

namespace radapt {

std::vector<double> init_uniform(int n_delta) {
  if (n_delta < 0) throw std::invalid_argument("init_uniform: n_delta must be >= 0");
  std::vector<double> psi(static_cast<std::size_t>(n_delta) + 2);
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = static_cast<double>(i + 1);
  return psi;
}

std::vector<ad::Var> build_axis(ad::Tape& tape, std::span<const ad::Var> psi, double a, double b,
                                std::span<const double> fixed) {
  if (psi.size() < 2) throw std::invalid_argument("build_axis: psi needs at least 2 entries");
  if (!(a < b)) throw std::invalid_argument("build_axis: requires a < b");
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    if (!(fixed[i] > a && fixed[i] < b))
      throw std::invalid_argument("build_axis: fixed coordinate outside (a, b)");
    if (i > 0 && fixed[i] < fixed[i - 1])
      throw std::invalid_argument("build_axis: fixed coordinates must be sorted");
  }

  std::vector<ad::Var> sorted = ad::sorted_by_value({psi.begin(), psi.end()});
  const ad::Var& lo = sorted.front();
  const ad::Var& hi = sorted.back();
  const double span_val = hi.value() - lo.value();
  if (span_val == 0.0)
    throw degenerate_axis_error("build_axis: all psi entries equal (" +
                                std::to_string(lo.value()) + "); axis has no extent");

  // The rescale maps the extremes to a and b exactly, so they are recorded
  // as constants; interior entries keep their dependence on lo and hi.
  std::vector<ad::Var> coords;
  coords.reserve(sorted.size() + fixed.size());
  ad::Var span = hi - lo;
  coords.push_back(tape.constant(a));
  for (std::size_t i = 1; i + 1 < sorted.size(); ++i)
    coords.push_back((sorted[i] - lo) / span * (b - a) + a);
  coords.push_back(tape.constant(b));

  if (!fixed.empty()) {
    for (double x : fixed) coords.push_back(tape.constant(x));
    coords = ad::sorted_by_value(std::move(coords));
  }
  return coords;
}

TensorMesh build_mesh(std::vector<std::vector<ad::Var>> axes) {
  if (axes.empty() || axes.size() > 2)
    throw std::invalid_argument("build_mesh: supports 1 or 2 axes");
  TensorMesh mesh;
  mesh.dim = static_cast<int>(axes.size());
  for (std::size_t d = 0; d < axes.size(); ++d) {
    if (axes[d].size() < 2) throw std::invalid_argument("build_mesh: axis needs >= 2 nodes");
    mesh.axes[d] = std::move(axes[d]);
  }
  return mesh;
}

ElementGeometry element_geometry(const TensorMesh& mesh, long element) {
  if (element < 0 || element >= mesh.element_count())
    throw std::invalid_argument("element_geometry: element index out of range");
  const auto [e0, e1] = mesh.element_coords(element);
  ElementGeometry g;
  g.lo[0] = mesh.axes[0][static_cast<std::size_t>(e0)].value();
  g.hi[0] = mesh.axes[0][static_cast<std::size_t>(e0) + 1].value();
  g.volume = g.hi[0] - g.lo[0];
  if (mesh.dim == 2) {
    g.lo[1] = mesh.axes[1][static_cast<std::size_t>(e1)].value();
    g.hi[1] = mesh.axes[1][static_cast<std::size_t>(e1) + 1].value();
    g.volume *= g.hi[1] - g.lo[1];
  }
  return g;
}

std::vector<double> axis_values(std::span<const ad::Var> axis) {
  std::vector<double> out;
  out.reserve(axis.size());
  for (const ad::Var& v : axis) out.push_back(v.value());
  return out;
}

}  // namespace radapt
