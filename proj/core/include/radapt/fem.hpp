#pragma once

#include <functional>
#include <span>
#include <vector>

#include "radapt/problems.hpp"

namespace radapt {

struct TridiagonalSystem {
  std::vector<double> sub, diag, super, rhs;  // sub[0] and super[n-1] unused
};

/// Thomas algorithm; the system is destroyed in place.
std::vector<double> thomas_solve(TridiagonalSystem sys);

/// Linear-element FEM solve of -(sigma u')' = f with the problem's
/// Dirichlet and Neumann data. Coordinates must be strictly increasing
/// (collapse duplicates first); returns one nodal value per coordinate.
std::vector<double> fem_solve_1d(std::span<const double> coords, const ProblemSpec& spec,
                                 int q = 10);

/// Merges nodes closer than 1e-12 * (b - a): adapted meshes may carry
/// zero-length elements a linear solve cannot accept.
std::vector<double> collapse_duplicate_nodes(std::span<const double> coords, double a, double b);

/// Energy-norm distance sqrt(int (u_exact - u)^2 + (u_exact' - u')^2) of a
/// piecewise-linear function given on its own mesh.
double energy_norm_error_pwl(const ProblemSpec& spec, std::span<const double> coords,
                             std::span<const double> nodal, int q = 10);

/// Uniform coordinates over the problem domain, merged with any fixed
/// interior coordinates so the baseline mesh conforms to materials.
std::vector<double> uniform_mesh(const ProblemSpec& spec, int elements);

struct ConvergenceRow {
  int elements;
  double error;
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  double rate;  // negated least-squares slope of log(error) vs log(elements)
};

double fitted_rate(std::span<const ConvergenceRow> rows);

/// FEM energy-norm error per element count; mesh_for supplies the mesh for
/// each count (uniform or externally adapted).
ConvergenceResult convergence_study(const ProblemSpec& spec, std::span<const int> counts,
                                    const std::function<std::vector<double>(int)>& mesh_for,
                                    int q = 10);

}  // namespace radapt
