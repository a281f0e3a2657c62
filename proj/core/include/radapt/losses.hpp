#pragma once

#include <span>

#include "radapt/mesh.hpp"
#include "radapt/problems.hpp"

namespace radapt {

/// Strong-form advection-reaction residual at one quadrature point:
/// r = beta * u' + u - f(x).
ad::Var residual_advection(const ProblemSpec& spec, const ad::Var& x, const ad::Var& u,
                           const ad::Var& du);

/// Integrated L1 norm of the residual (hyperbolic problems).
ad::Var loss_collocation(const ProblemSpec& spec, const TensorMesh& mesh,
                         std::span<const ad::Var> nodal, int q);

/// L2 norm of the residual, with the guarded square root (hyperbolic).
ad::Var loss_least_squares(const ProblemSpec& spec, const TensorMesh& mesh,
                           std::span<const ad::Var> nodal, int q);

/// Ritz energy: per-element volume terms plus the Neumann boundary term.
/// Elements masked out by the problem's active region contribute nothing
/// and their nodal values never reach the tape.
ad::Var loss_ritz(const ProblemSpec& spec, const TensorMesh& mesh,
                  std::span<const ad::Var> nodal, int q);

/// Dispatch with spec/loss pairing validation.
ad::Var loss_value(LossKind kind, const ProblemSpec& spec, const TensorMesh& mesh,
                   std::span<const ad::Var> nodal, int q);

/// The quantity plotted in every loss-evolution figure: loss minus the
/// minimal (exact-solution) loss.
double loss_error(double loss, const ProblemSpec& spec);

}  // namespace radapt
