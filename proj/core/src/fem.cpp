#include "radapt/fem.hpp"

#include <cmath>
#include <stdexcept>

#include "radapt/quadrature.hpp"

namespace radapt {

std::vector<double> thomas_solve(TridiagonalSystem sys) {
  const std::size_t n = sys.diag.size();
  if (n == 0 || sys.sub.size() != n || sys.super.size() != n || sys.rhs.size() != n)
    throw std::invalid_argument("thomas_solve: inconsistent system dimensions");
  for (std::size_t i = 1; i < n; ++i) {
    const double w = sys.sub[i] / sys.diag[i - 1];
    sys.diag[i] -= w * sys.super[i - 1];
    sys.rhs[i] -= w * sys.rhs[i - 1];
  }
  std::vector<double> u(n);
  u[n - 1] = sys.rhs[n - 1] / sys.diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) u[i] = (sys.rhs[i] - sys.super[i] * u[i + 1]) / sys.diag[i];
  return u;
}

std::vector<double> fem_solve_1d(std::span<const double> coords, const ProblemSpec& spec, int q) {
  if (spec.kind != ProblemKind::elliptic || spec.dim != 1)
    throw std::invalid_argument("fem_solve_1d: 1D elliptic problems only");
  const std::size_t n = coords.size();
  if (n < 2) throw std::invalid_argument("fem_solve_1d: need at least 2 nodes");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(coords[i] < coords[i + 1]))
      throw std::invalid_argument("fem_solve_1d: coordinates must be strictly increasing");
  const bool dir_lo = spec.bc[0][0] == BcType::dirichlet;
  const bool dir_hi = spec.bc[0][1] == BcType::dirichlet;
  if (!dir_lo && !dir_hi)
    throw std::invalid_argument("fem_solve_1d: all-Neumann system is singular");

  const QuadRule& rule = gauss_rule(q);
  TridiagonalSystem sys;
  sys.sub.assign(n, 0.0);
  sys.diag.assign(n, 0.0);
  sys.super.assign(n, 0.0);
  sys.rhs.assign(n, 0.0);

  for (std::size_t e = 0; e + 1 < n; ++e) {
    const double x0 = coords[e], x1 = coords[e + 1];
    const double h = x1 - x0;
    const double k = spec.sigma_at(0.5 * (x0 + x1)) / h;
    sys.diag[e] += k;
    sys.diag[e + 1] += k;
    sys.super[e] -= k;
    sys.sub[e + 1] -= k;
    sys.rhs[e] += integrate_interval_value(
        rule, x0, x1, [&](double x) { return spec.f.value(x, 0.0) * (x1 - x) / h; });
    sys.rhs[e + 1] += integrate_interval_value(
        rule, x0, x1, [&](double x) { return spec.f.value(x, 0.0) * (x - x0) / h; });
  }
  if (spec.bc[0][0] == BcType::neumann)
    sys.rhs.front() += spec.g.value(coords.front(), 0.0, -1.0, 0.0);
  if (spec.bc[0][1] == BcType::neumann)
    sys.rhs.back() += spec.g.value(coords.back(), 0.0, 1.0, 0.0);

  if (dir_lo) {
    sys.diag.front() = 1.0;
    sys.super.front() = 0.0;
    sys.rhs.front() = 0.0;
    sys.sub[1] = 0.0;  // keep symmetry after constraining
  }
  if (dir_hi) {
    sys.diag.back() = 1.0;
    sys.sub.back() = 0.0;
    sys.rhs.back() = 0.0;
    sys.super[n - 2] = 0.0;
  }
  return thomas_solve(std::move(sys));
}

std::vector<double> collapse_duplicate_nodes(std::span<const double> coords, double a, double b) {
  const double tol = 1e-12 * (b - a);
  std::vector<double> out;
  out.reserve(coords.size());
  for (double x : coords)
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  return out;
}

double energy_norm_error_pwl(const ProblemSpec& spec, std::span<const double> coords,
                             std::span<const double> nodal, int q) {
  if (coords.size() != nodal.size() || coords.size() < 2)
    throw std::invalid_argument("energy_norm_error_pwl: one nodal value per coordinate");
  const QuadRule& rule = gauss_rule(q);
  double total = 0.0;
  for (std::size_t e = 0; e + 1 < coords.size(); ++e) {
    const double h = coords[e + 1] - coords[e];
    if (h == 0.0) continue;
    const double slope = (nodal[e + 1] - nodal[e]) / h;
    total += integrate_interval_value(rule, coords[e], coords[e + 1], [&](double x) {
      const double du = spec.exact_grad(x, 0.0)[0] - slope;
      const double dv = spec.exact_u(x, 0.0) - (nodal[e] + slope * (x - coords[e]));
      return dv * dv + du * du;
    });
  }
  return std::sqrt(total);
}

std::vector<double> uniform_mesh(const ProblemSpec& spec, int elements) {
  if (elements < 1) throw std::invalid_argument("uniform_mesh: need at least one element");
  std::vector<double> coords;
  for (int i = 0; i <= elements; ++i)
    coords.push_back(spec.lo[0] + (spec.hi[0] - spec.lo[0]) * i / elements);
  for (double x : spec.fixed[0]) coords.push_back(x);
  std::sort(coords.begin(), coords.end());
  return collapse_duplicate_nodes(coords, spec.lo[0], spec.hi[0]);
}

double fitted_rate(std::span<const ConvergenceRow> rows) {
  if (rows.size() < 2) throw std::invalid_argument("fitted_rate: need at least 2 rows");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : rows) {
    const double x = std::log(static_cast<double>(r.elements));
    const double y = std::log(r.error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(rows.size());
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceResult convergence_study(const ProblemSpec& spec, std::span<const int> counts,
                                    const std::function<std::vector<double>(int)>& mesh_for,
                                    int q) {
  if (counts.size() < 3) throw std::invalid_argument("convergence_study: need >= 3 element counts");
  ConvergenceResult res;
  for (int c : counts) {
    const std::vector<double> coords = mesh_for(c);
    const std::vector<double> u = fem_solve_1d(coords, spec, q);
    res.rows.push_back({c, energy_norm_error_pwl(spec, coords, u, q)});
  }
  res.rate = fitted_rate(res.rows);
  return res;
}

}  // namespace radapt
