#include "radapt/losses.hpp"

#include <stdexcept>

#include "radapt/quadrature.hpp"

namespace radapt {

namespace {

void require_pairing(LossKind kind, const ProblemSpec& spec) {
  const bool residual = kind == LossKind::collocation || kind == LossKind::least_squares;
  if (residual && spec.kind != ProblemKind::hyperbolic)
    throw std::invalid_argument("residual losses require a hyperbolic problem");
  if (kind == LossKind::ritz && spec.kind != ProblemKind::elliptic)
    throw std::invalid_argument("the Ritz loss requires an elliptic problem");
}

// Accumulates per-element residual integrals for the two hyperbolic losses.
template <class PerPoint>
ad::Var accumulate_residual(const ProblemSpec& spec, const TensorMesh& mesh,
                            std::span<const ad::Var> nodal, int q, PerPoint&& transform) {
  if (mesh.dim != 1) throw std::invalid_argument("residual losses are 1D");
  const QuadRule& rule = gauss_rule(q);
  const auto& ax = mesh.axes[0];
  ad::Tape& tape = *ax.front().tape();
  ad::Var total = tape.constant(0.0);
  for (std::size_t e = 0; e + 1 < ax.size(); ++e) {
    const ad::Var& x0 = ax[e];
    const ad::Var& x1 = ax[e + 1];
    if (x1.value() - x0.value() == 0.0) continue;
    ad::Var du = (nodal[e + 1] - nodal[e]) / (x1 - x0);
    total += integrate_interval(
        tape, rule, x0, x1,
        [&](const ad::Var& x, double t) {
          ad::Var u = nodal[e] * (0.5 * (1.0 - t)) + nodal[e + 1] * (0.5 * (1.0 + t));
          return transform(residual_advection(spec, x, u, du));
        },
        static_cast<int>(e));
  }
  return total;
}

ad::Var ritz_1d(const ProblemSpec& spec, const TensorMesh& mesh, std::span<const ad::Var> nodal,
                const QuadRule& rule) {
  const auto& ax = mesh.axes[0];
  ad::Tape& tape = *ax.front().tape();
  ad::Var zero = tape.constant(0.0);
  ad::Var total = zero;
  for (std::size_t e = 0; e + 1 < ax.size(); ++e) {
    const ad::Var& x0 = ax[e];
    const ad::Var& x1 = ax[e + 1];
    if (x1.value() - x0.value() == 0.0) continue;
    const double sig = spec.sigma_at(0.5 * (x0.value() + x1.value()));
    ad::Var h = x1 - x0;
    ad::Var du = (nodal[e + 1] - nodal[e]) / h;
    total += du * du * h * (0.5 * sig);
    total -= integrate_interval(
        tape, rule, x0, x1,
        [&](const ad::Var& x, double t) {
          ad::Var u = nodal[e] * (0.5 * (1.0 - t)) + nodal[e + 1] * (0.5 * (1.0 + t));
          return spec.f.record(x, zero) * u;
        },
        static_cast<int>(e));
  }
  if (spec.bc[0][0] == BcType::neumann)
    total -= nodal.front() * spec.g.value(ax.front().value(), 0.0, -1.0, 0.0);
  if (spec.bc[0][1] == BcType::neumann)
    total -= nodal.back() * spec.g.value(ax.back().value(), 0.0, 1.0, 0.0);
  return total;
}

ad::Var ritz_2d(const ProblemSpec& spec, const TensorMesh& mesh, std::span<const ad::Var> nodal,
                const QuadRule& rule) {
  const auto& ax = mesh.axes[0];
  const auto& ay = mesh.axes[1];
  ad::Tape& tape = *ax.front().tape();
  ad::Var total = tape.constant(0.0);

  for (int e0 = 0; e0 + 1 < mesh.axis_size(0); ++e0) {
    for (int e1 = 0; e1 + 1 < mesh.axis_size(1); ++e1) {
      const ad::Var& x0 = ax[static_cast<std::size_t>(e0)];
      const ad::Var& x1 = ax[static_cast<std::size_t>(e0) + 1];
      const ad::Var& y0 = ay[static_cast<std::size_t>(e1)];
      const ad::Var& y1 = ay[static_cast<std::size_t>(e1) + 1];
      const double hx = x1.value() - x0.value();
      const double hy = y1.value() - y0.value();
      if (hx * hy == 0.0) continue;
      const double mx = 0.5 * (x0.value() + x1.value());
      const double my = 0.5 * (y0.value() + y1.value());
      if (!spec.is_active(mx, my)) continue;
      const double sig = spec.sigma_at(mx, my);

      const ad::Var& u00 = nodal[static_cast<std::size_t>(mesh.node_index(e0, e1))];
      const ad::Var& u10 = nodal[static_cast<std::size_t>(mesh.node_index(e0 + 1, e1))];
      const ad::Var& u01 = nodal[static_cast<std::size_t>(mesh.node_index(e0, e1 + 1))];
      const ad::Var& u11 = nodal[static_cast<std::size_t>(mesh.node_index(e0 + 1, e1 + 1))];
      ad::Var dx = u10 - u00;
      ad::Var dy = u01 - u00;
      ad::Var dxy = u11 - u10 - u01 + u00;
      ad::Var wx = x1 - x0;
      ad::Var wy = y1 - y0;

      total += integrate_box(
          tape, rule, x0, x1, y0, y1,
          [&](const ad::Var& x, const ad::Var& y, double s, double t) {
            const double a = 0.5 * (1.0 + s);
            const double b = 0.5 * (1.0 + t);
            ad::Var u = u00 + dx * a + dy * b + dxy * (a * b);
            ad::Var ux = (dx + dxy * b) / wx;
            ad::Var uy = (dy + dxy * a) / wy;
            return (ux * ux + uy * uy) * (0.5 * sig) - spec.f.record(x, y) * u;
          },
          static_cast<int>(mesh.element_index(e0, e1)));
    }
  }

  // Neumann terms along the four box sides, honoring the active mask.
  const auto side = [&](int axis, int end) {
    if (spec.bc[static_cast<std::size_t>(axis)][static_cast<std::size_t>(end)] != BcType::neumann)
      return;
    const auto& fixed_axis = axis == 0 ? ax : ay;
    const auto& tang_axis = axis == 0 ? ay : ax;
    const int fixed_idx = end == 0 ? 0 : static_cast<int>(fixed_axis.size()) - 1;
    const ad::Var& fc = fixed_axis[static_cast<std::size_t>(fixed_idx)];
    const double nx = axis == 0 ? (end == 0 ? -1.0 : 1.0) : 0.0;
    const double ny = axis == 1 ? (end == 0 ? -1.0 : 1.0) : 0.0;
    for (std::size_t j = 0; j + 1 < tang_axis.size(); ++j) {
      const ad::Var& c0 = tang_axis[j];
      const ad::Var& c1 = tang_axis[j + 1];
      if (c1.value() - c0.value() == 0.0) continue;
      const double mid = 0.5 * (c0.value() + c1.value());
      const double mx = axis == 0 ? fc.value() : mid;
      const double my = axis == 0 ? mid : fc.value();
      if (!spec.is_active(mx, my)) continue;
      const auto node = [&](std::size_t jj) {
        return axis == 0 ? mesh.node_index(fixed_idx, static_cast<int>(jj))
                         : mesh.node_index(static_cast<int>(jj), fixed_idx);
      };
      total -= integrate_edge_linear(
          tape, rule, c0, c1, nodal[static_cast<std::size_t>(node(j))],
          nodal[static_cast<std::size_t>(node(j + 1))],
          [&](const ad::Var& c) {
            return axis == 0 ? spec.g.record(fc, c, nx, ny) : spec.g.record(c, fc, nx, ny);
          },
          static_cast<int>(j));
    }
  };
  side(0, 0);
  side(0, 1);
  side(1, 0);
  side(1, 1);
  return total;
}

}  // namespace

ad::Var residual_advection(const ProblemSpec& spec, const ad::Var& x, const ad::Var& u,
                           const ad::Var& du) {
  ad::Var zero = x.tape()->constant(0.0);
  return du * spec.beta + u - spec.f.record(x, zero);
}

ad::Var loss_collocation(const ProblemSpec& spec, const TensorMesh& mesh,
                         std::span<const ad::Var> nodal, int q) {
  require_pairing(LossKind::collocation, spec);
  return accumulate_residual(spec, mesh, nodal, q, [](const ad::Var& r) { return ad::abs(r); });
}

ad::Var loss_least_squares(const ProblemSpec& spec, const TensorMesh& mesh,
                           std::span<const ad::Var> nodal, int q) {
  require_pairing(LossKind::least_squares, spec);
  ad::Var total =
      accumulate_residual(spec, mesh, nodal, q, [](const ad::Var& r) { return r * r; });
  return ad::sqrt(total);
}

ad::Var loss_ritz(const ProblemSpec& spec, const TensorMesh& mesh,
                  std::span<const ad::Var> nodal, int q) {
  require_pairing(LossKind::ritz, spec);
  const QuadRule& rule = gauss_rule(q);
  return mesh.dim == 1 ? ritz_1d(spec, mesh, nodal, rule) : ritz_2d(spec, mesh, nodal, rule);
}

ad::Var loss_value(LossKind kind, const ProblemSpec& spec, const TensorMesh& mesh,
                   std::span<const ad::Var> nodal, int q) {
  switch (kind) {
    case LossKind::collocation: return loss_collocation(spec, mesh, nodal, q);
    case LossKind::least_squares: return loss_least_squares(spec, mesh, nodal, q);
    case LossKind::ritz: return loss_ritz(spec, mesh, nodal, q);
  }
  throw std::invalid_argument("loss_value: unknown loss kind");
}

double loss_error(double loss, const ProblemSpec& spec) { return loss - spec.exact_energy; }

}  // namespace radapt
