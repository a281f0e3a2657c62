#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "radapt/fields.hpp"

namespace radapt {

enum class ProblemKind { hyperbolic, elliptic };
enum class LossKind { collocation, least_squares, ritz };
enum class BcType { dirichlet, neumann, inflow, outflow };

const char* loss_kind_name(LossKind kind);
std::optional<LossKind> parse_loss_kind(std::string_view name);

/// Catalog defaults so a bare experiment id reproduces the intended run.
struct RunDefaults {
  int elements = 16;  // per axis
  LossKind loss = LossKind::ritz;
  int stage1_epochs = 1000;
  int stage2_epochs = 5000;
  double lr = 1e-2;
};

/// One concrete experiment: domain, material, sources, boundary data,
/// Dirichlet lift, exact reference fields, and run defaults.
struct ProblemSpec {
  int id = 0;
  std::string name;
  ProblemKind kind = ProblemKind::elliptic;
  int dim = 1;
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{1.0, 1.0};
  std::array<std::vector<double>, 2> fixed;            // interior fixed coordinates per axis
  std::array<std::array<BcType, 2>, 2> bc{};           // bc[axis][end], end 0 = lo, 1 = hi
  double beta = 0.0;                                   // advection velocity (hyperbolic, axis 0)
  std::function<double(double, double)> sigma;         // material, evaluated at element midpoints
  Field f;                                             // volumetric source
  Field phi_d;                                         // Dirichlet lift weight (u_D = 0 throughout)
  BoundaryField g;                                     // Neumann datum; empty if none
  std::function<double(double, double)> exact_u;
  std::function<std::array<double, 2>(double, double)> exact_grad;
  double exact_energy = 0.0;                           // minimal loss value (0 for residual losses)
  std::function<bool(double, double)> active;          // element-midpoint mask; null = all active
  std::array<std::vector<double>, 2> grade_toward;     // singular points for evaluation meshes
  std::vector<LossKind> allowed_losses;
  RunDefaults defaults;

  bool is_active(double x, double y = 0.0) const { return !active || active(x, y); }
  double sigma_at(double x, double y = 0.0) const { return sigma ? sigma(x, y) : 1.0; }
  bool allows(LossKind kind) const;
};

struct ExperimentOptions {
  double beta = 1e-3;  // experiment 1 only
};

/// Experiments 1-6. Experiment 1 is the advection-reaction problem; 2-6
/// are the elliptic catalog entries.
ProblemSpec make_experiment(int id, const ExperimentOptions& opt = {});

/// Energy of the exact solution evaluated with dense quadrature on an
/// internally built evaluation mesh, geometrically graded toward the
/// problem's singular points. Plain double arithmetic throughout.
double exact_energy_reference(const ProblemSpec& spec, int elements_per_axis = 128, int q = 10);

/// Ritz energy of a 1D piecewise-linear function given by sorted coordinates
/// and nodal values. Zero-length elements contribute nothing.
double ritz_energy_pwl(const ProblemSpec& spec, std::span<const double> coords,
                       std::span<const double> nodal, int q = 10);

/// Nodal values of the exact solution on a given mesh (1D helper).
std::vector<double> exact_nodal_values(const ProblemSpec& spec, std::span<const double> coords);

}  // namespace radapt
