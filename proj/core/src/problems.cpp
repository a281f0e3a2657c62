#include "radapt/problems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "radapt/quadrature.hpp"

namespace radapt {

namespace {

constexpr double kPi = 3.14159265358979323846;

// The generic experiment lambdas below are instantiated for both double and
// ad::Var arguments; these usings give the double instantiation the same
// unqualified names that ADL finds for Var.
using std::atan;
using std::atan2;
using std::clamp;
using std::cos;
using std::exp;
using std::min;
using std::pow;
using std::sin;
using std::sqrt;

Field constant_field(double c) {
  return Field{
      [c](double, double) { return c; },
      [c](const ad::Var& x, const ad::Var&) { return x.tape()->constant(c); },
  };
}

// -2 * integral_0^{pi/4} sec^{4/3}: the L-shape energy reduced to one
// dimension by symmetry (six equal wedges, radial part integrated in
// closed form). Composite Gauss; converges to machine precision.
double lshape_exact_energy() {
  const QuadRule& rule = gauss_rule(12);
  const int panels = 64;
  const double h = (kPi / 4.0) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    total += integrate_interval_value(rule, p * h, (p + 1) * h,
                                      [](double t) { return std::pow(std::cos(t), -4.0 / 3.0); });
  }
  return -total;
}

ProblemSpec experiment1(double beta) {
  ProblemSpec s;
  s.id = 1;
  s.name = "advection-reaction boundary layer";
  s.kind = ProblemKind::hyperbolic;
  s.dim = 1;
  s.lo = {0.0, 0.0};
  s.hi = {1.0, 1.0};
  s.bc[0] = {BcType::inflow, BcType::outflow};
  s.beta = beta;
  s.sigma = [](double, double) { return 1.0; };
  s.f = constant_field(1.0);
  s.phi_d = make_field([](auto x, auto) { return x; });
  s.exact_u = [beta](double x, double) { return 1.0 - std::exp(-x / beta); };
  s.exact_grad = [beta](double x, double) {
    return std::array<double, 2>{std::exp(-x / beta) / beta, 0.0};
  };
  s.exact_energy = 0.0;  // both residual losses vanish at the exact solution
  s.allowed_losses = {LossKind::collocation, LossKind::least_squares};
  s.defaults = {8, LossKind::least_squares, 1000, 4000, 1e-2};
  return s;
}

ProblemSpec experiment2() {
  ProblemSpec s;
  s.id = 2;
  s.name = "singular solution x^0.7";
  s.kind = ProblemKind::elliptic;
  s.dim = 1;
  s.lo = {0.0, 0.0};
  s.hi = {10.0, 10.0};
  s.bc[0] = {BcType::dirichlet, BcType::neumann};
  s.sigma = [](double, double) { return 1.0; };
  s.f = make_field([](auto x, auto) { return 0.21 * pow(x, -1.3); });
  s.phi_d = make_field([](auto x, auto) { return x * 0.1; });
  s.g = make_boundary_field(
      [](auto x, auto, double nx, double) { return 0.7 * pow(x, -0.3) * nx; });
  s.exact_u = [](double x, double) { return std::pow(x, 0.7); };
  s.exact_grad = [](double x, double) {
    return std::array<double, 2>{0.7 * std::pow(x, -0.3), 0.0};
  };
  // -1/2 int (0.7 x^-0.3)^2 = -0.6125 * 10^0.4
  s.exact_energy = -0.6125 * std::pow(10.0, 0.4);
  s.grade_toward[0] = {0.0};
  s.allowed_losses = {LossKind::ritz};
  s.defaults = {16, LossKind::ritz, 1000, 7000, 1e-2};
  return s;
}

ProblemSpec experiment3() {
  ProblemSpec s;
  s.id = 3;
  s.name = "high-gradient atan solution";
  s.kind = ProblemKind::elliptic;
  s.dim = 1;
  s.lo = {0.0, 0.0};
  s.hi = {10.0, 10.0};
  s.bc[0] = {BcType::dirichlet, BcType::neumann};
  s.sigma = [](double, double) { return 1.0; };
  s.f = make_field([](auto x, auto) {
    auto w = 2.0 * x - 10.0;
    auto d = 1.0 + w * w;
    return 8.0 * w / (d * d);
  });
  s.phi_d = make_field([](auto x, auto) { return x * 0.1; });
  s.g = make_boundary_field([](auto x, auto, double nx, double) {
    auto w = 2.0 * x - 10.0;
    return 2.0 / (1.0 + w * w) * nx;
  });
  s.exact_u = [](double x, double) { return std::atan(2.0 * x - 10.0) + std::atan(10.0); };
  s.exact_grad = [](double x, double) {
    const double w = 2.0 * x - 10.0;
    return std::array<double, 2>{2.0 / (1.0 + w * w), 0.0};
  };
  s.exact_energy = -(10.0 / 101.0 + std::atan(10.0));
  s.allowed_losses = {LossKind::ritz};
  s.defaults = {16, LossKind::ritz, 1000, 5000, 1e-2};
  return s;
}

ProblemSpec experiment4() {
  ProblemSpec s;
  s.id = 4;
  s.name = "two materials with conforming interface";
  s.kind = ProblemKind::elliptic;
  s.dim = 1;
  s.lo = {0.0, 0.0};
  s.hi = {1.0, 1.0};
  s.fixed[0] = {0.5};
  s.bc[0] = {BcType::dirichlet, BcType::dirichlet};
  s.sigma = [](double x, double) { return x < 0.5 ? 1.0 : 10.0; };
  s.f = make_field([](auto x, auto) { return 4.0 * kPi * kPi * sin(2.0 * kPi * x); });
  s.phi_d = make_field([](auto x, auto) { return 4.0 * x * (1.0 - x); });
  s.exact_u = [](double x, double) { return std::sin(2.0 * kPi * x) / (x < 0.5 ? 1.0 : 10.0); };
  s.exact_grad = [](double x, double) {
    return std::array<double, 2>{2.0 * kPi * std::cos(2.0 * kPi * x) / (x < 0.5 ? 1.0 : 10.0),
                                 0.0};
  };
  // -1/2 int sigma (u')^2 = -0.55 pi^2
  s.exact_energy = -0.55 * kPi * kPi;
  s.allowed_losses = {LossKind::ritz};
  s.defaults = {16, LossKind::ritz, 500, 1000, 1e-2};
  return s;
}

ProblemSpec experiment5() {
  ProblemSpec s;
  s.id = 5;
  s.name = "2D smooth polynomial";
  s.kind = ProblemKind::elliptic;
  s.dim = 2;
  s.lo = {0.0, 0.0};
  s.hi = {1.0, 1.0};
  s.bc[0] = {BcType::dirichlet, BcType::dirichlet};
  s.bc[1] = {BcType::dirichlet, BcType::dirichlet};
  s.sigma = [](double, double) { return 1.0; };
  auto p = [](auto t) { return t * t * (t - 1.0); };
  s.f = make_field([p](auto x, auto y) {
    return -((6.0 * x - 2.0) * p(y) + p(x) * (6.0 * y - 2.0));
  });
  s.phi_d = make_field(
      [](auto x, auto y) { return 16.0 * x * (1.0 - x) * y * (1.0 - y); });
  s.exact_u = [p](double x, double y) { return p(x) * p(y); };
  s.exact_grad = [p](double x, double y) {
    const auto dp = [](double t) { return 3.0 * t * t - 2.0 * t; };
    return std::array<double, 2>{dp(x) * p(y), p(x) * dp(y)};
  };
  s.exact_energy = -2.0 / 1575.0;
  s.allowed_losses = {LossKind::ritz};
  s.defaults = {16, LossKind::ritz, 1000, 5000, 1e-2};
  return s;
}

ProblemSpec experiment6() {
  ProblemSpec s;
  s.id = 6;
  s.name = "L-shape with re-entrant corner";
  s.kind = ProblemKind::elliptic;
  s.dim = 2;
  s.lo = {-1.0, -1.0};
  s.hi = {1.0, 1.0};
  s.fixed[0] = {0.0};
  s.fixed[1] = {0.0};
  s.bc[0] = {BcType::neumann, BcType::neumann};
  s.bc[1] = {BcType::neumann, BcType::neumann};
  s.sigma = [](double, double) { return 1.0; };
  s.f = constant_field(0.0);
  // Distance to the two Dirichlet legs {x2=0, x1 in [-1,0]} and
  // {x1=0, x2 in [-1,0]}, capped at 1 to keep surrogate magnitudes O(1).
  s.phi_d = make_field([](auto x, auto y) {
    auto tx = clamp(x, -1.0, 0.0);
    auto dx = x - tx;
    auto d1 = sqrt(dx * dx + y * y);
    auto ty = clamp(y, -1.0, 0.0);
    auto dy = y - ty;
    auto d2 = sqrt(x * x + dy * dy);
    return min(min(d1, d2), 1.0);
  });
  // grad u = (2/3) r^{-1/3} (sin(pi/3 - theta/3), cos(pi/3 - theta/3))
  s.g = make_boundary_field([](auto x, auto y, double nx, double ny) {
    auto r2 = x * x + y * y;
    auto scale = (2.0 / 3.0) * pow(r2, -1.0 / 6.0);
    auto ang = kPi / 3.0 - atan2(y, x) * (1.0 / 3.0);
    return scale * (sin(ang) * nx + cos(ang) * ny);
  });
  s.exact_u = [](double x, double y) {
    if (x < 0.0 && y < 0.0) return 0.0;  // outside the L-shape
    const double r = std::hypot(x, y);
    if (r == 0.0) return 0.0;
    return std::pow(r, 2.0 / 3.0) *
           std::sin((2.0 / 3.0) * (std::atan2(y, x) + kPi / 2.0));
  };
  s.exact_grad = [](double x, double y) {
    if (x < 0.0 && y < 0.0) return std::array<double, 2>{0.0, 0.0};
    const double r = std::hypot(x, y);
    if (r == 0.0) return std::array<double, 2>{0.0, 0.0};
    const double ang = kPi / 3.0 - std::atan2(y, x) / 3.0;
    const double scale = (2.0 / 3.0) * std::pow(r, -1.0 / 3.0);
    return std::array<double, 2>{scale * std::sin(ang), scale * std::cos(ang)};
  };
  s.exact_energy = lshape_exact_energy();
  s.active = [](double x, double y) { return !(x < 0.0 && y < 0.0); };
  s.grade_toward[0] = {0.0};
  s.grade_toward[1] = {0.0};
  s.allowed_losses = {LossKind::ritz};
  s.defaults = {16, LossKind::ritz, 1000, 9000, 1e-2};
  return s;
}

// Evaluation mesh for reference integrals: uniform plus fixed coordinates
// plus geometric refinement toward each singular point.
std::vector<double> graded_axis(const ProblemSpec& spec, int d, int n) {
  const double a = spec.lo[static_cast<std::size_t>(d)];
  const double b = spec.hi[static_cast<std::size_t>(d)];
  std::vector<double> coords;
  for (int i = 0; i <= n; ++i) coords.push_back(a + (b - a) * i / n);
  for (double x : spec.fixed[static_cast<std::size_t>(d)]) coords.push_back(x);
  for (double p : spec.grade_toward[static_cast<std::size_t>(d)]) {
    for (int k = 1; k <= 52; ++k) {
      const double step = (b - a) * std::pow(0.5, k);
      if (p + step < b) coords.push_back(p + step);
      if (p - step > a) coords.push_back(p - step);
    }
    if (p > a && p < b) coords.push_back(p);
  }
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  return coords;
}

}  // namespace

const char* loss_kind_name(LossKind kind) {
  switch (kind) {
    case LossKind::collocation: return "collocation";
    case LossKind::least_squares: return "least-squares";
    case LossKind::ritz: return "ritz";
  }
  return "?";
}

std::optional<LossKind> parse_loss_kind(std::string_view name) {
  if (name == "collocation") return LossKind::collocation;
  if (name == "least-squares" || name == "least_squares") return LossKind::least_squares;
  if (name == "ritz") return LossKind::ritz;
  return std::nullopt;
}

bool ProblemSpec::allows(LossKind kind) const {
  return std::find(allowed_losses.begin(), allowed_losses.end(), kind) != allowed_losses.end();
}

ProblemSpec make_experiment(int id, const ExperimentOptions& opt) {
  switch (id) {
    case 1: return experiment1(opt.beta);
    case 2: return experiment2();
    case 3: return experiment3();
    case 4: return experiment4();
    case 5: return experiment5();
    case 6: return experiment6();
    default: throw std::invalid_argument("make_experiment: unknown experiment id " + std::to_string(id));
  }
}

double exact_energy_reference(const ProblemSpec& spec, int elements_per_axis, int q) {
  if (spec.kind != ProblemKind::elliptic)
    throw std::invalid_argument("exact_energy_reference: elliptic problems only");
  const QuadRule& rule = gauss_rule(q);

  const std::vector<double> xs = graded_axis(spec, 0, elements_per_axis);
  double grad_term = 0.0, source_term = 0.0, neumann_term = 0.0;

  if (spec.dim == 1) {
    for (std::size_t e = 0; e + 1 < xs.size(); ++e) {
      const double x0 = xs[e], x1 = xs[e + 1];
      const double sig = spec.sigma_at(0.5 * (x0 + x1));
      grad_term += sig * integrate_interval_value(rule, x0, x1, [&](double x) {
        const double g = spec.exact_grad(x, 0.0)[0];
        return g * g;
      });
      source_term += integrate_interval_value(
          rule, x0, x1, [&](double x) { return spec.f.value(x, 0.0) * spec.exact_u(x, 0.0); });
    }
    if (spec.bc[0][0] == BcType::neumann)
      neumann_term += spec.g.value(xs.front(), 0.0, -1.0, 0.0) * spec.exact_u(xs.front(), 0.0);
    if (spec.bc[0][1] == BcType::neumann)
      neumann_term += spec.g.value(xs.back(), 0.0, 1.0, 0.0) * spec.exact_u(xs.back(), 0.0);
  } else {
    const std::vector<double> ys = graded_axis(spec, 1, elements_per_axis);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
        const double mx = 0.5 * (xs[i] + xs[i + 1]);
        const double my = 0.5 * (ys[j] + ys[j + 1]);
        if (!spec.is_active(mx, my)) continue;
        const double sig = spec.sigma_at(mx, my);
        grad_term += sig * integrate_box_value(rule, xs[i], xs[i + 1], ys[j], ys[j + 1],
                                               [&](double x, double y) {
                                                 const auto g = spec.exact_grad(x, y);
                                                 return g[0] * g[0] + g[1] * g[1];
                                               });
        source_term += integrate_box_value(
            rule, xs[i], xs[i + 1], ys[j], ys[j + 1],
            [&](double x, double y) { return spec.f.value(x, y) * spec.exact_u(x, y); });
      }
    }
    // Box sides carrying Neumann data, skipping pieces masked out.
    const auto edge_term = [&](int axis, int end) {
      if (spec.bc[static_cast<std::size_t>(axis)][static_cast<std::size_t>(end)] != BcType::neumann)
        return;
      const double fixed_coord = end == 0 ? spec.lo[static_cast<std::size_t>(axis)]
                                          : spec.hi[static_cast<std::size_t>(axis)];
      const double nx = axis == 0 ? (end == 0 ? -1.0 : 1.0) : 0.0;
      const double ny = axis == 1 ? (end == 0 ? -1.0 : 1.0) : 0.0;
      const std::vector<double>& tang = axis == 0 ? ys : xs;
      for (std::size_t j = 0; j + 1 < tang.size(); ++j) {
        const double mid = 0.5 * (tang[j] + tang[j + 1]);
        const double mx = axis == 0 ? fixed_coord : mid;
        const double my = axis == 0 ? mid : fixed_coord;
        if (!spec.is_active(mx, my)) continue;
        neumann_term += integrate_interval_value(rule, tang[j], tang[j + 1], [&](double t) {
          const double x = axis == 0 ? fixed_coord : t;
          const double y = axis == 0 ? t : fixed_coord;
          return spec.g.value(x, y, nx, ny) * spec.exact_u(x, y);
        });
      }
    };
    edge_term(0, 0);
    edge_term(0, 1);
    edge_term(1, 0);
    edge_term(1, 1);
  }
  return 0.5 * grad_term - source_term - neumann_term;
}

double ritz_energy_pwl(const ProblemSpec& spec, std::span<const double> coords,
                       std::span<const double> nodal, int q) {
  if (spec.kind != ProblemKind::elliptic || spec.dim != 1)
    throw std::invalid_argument("ritz_energy_pwl: 1D elliptic problems only");
  if (coords.size() != nodal.size() || coords.size() < 2)
    throw std::invalid_argument("ritz_energy_pwl: one nodal value per coordinate required");
  const QuadRule& rule = gauss_rule(q);
  double grad_term = 0.0, source_term = 0.0;
  for (std::size_t e = 0; e + 1 < coords.size(); ++e) {
    const double h = coords[e + 1] - coords[e];
    if (h == 0.0) continue;
    const double slope = (nodal[e + 1] - nodal[e]) / h;
    grad_term += spec.sigma_at(0.5 * (coords[e] + coords[e + 1])) * slope * slope * h;
    source_term += integrate_interval_value(rule, coords[e], coords[e + 1], [&](double x) {
      const double u = nodal[e] + slope * (x - coords[e]);
      return spec.f.value(x, 0.0) * u;
    });
  }
  double neumann_term = 0.0;
  if (spec.bc[0][0] == BcType::neumann)
    neumann_term += spec.g.value(coords.front(), 0.0, -1.0, 0.0) * nodal.front();
  if (spec.bc[0][1] == BcType::neumann)
    neumann_term += spec.g.value(coords.back(), 0.0, 1.0, 0.0) * nodal.back();
  return 0.5 * grad_term - source_term - neumann_term;
}

std::vector<double> exact_nodal_values(const ProblemSpec& spec, std::span<const double> coords) {
  std::vector<double> out;
  out.reserve(coords.size());
  for (double x : coords) out.push_back(spec.exact_u(x, 0.0));
  return out;
}

}  // namespace radapt
