#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "radapt/autodiff.hpp"

namespace radapt {

/// Gauss-Legendre rule on the reference interval [-1, 1]. A rule with q
/// points integrates polynomials up to degree 2q-1 exactly; the weights
/// sum to 2.
struct QuadRule {
  std::vector<double> points;
  std::vector<double> weights;
  int order() const { return static_cast<int>(points.size()); }
};

/// Standard Gauss-Legendre nodes/weights for 1 <= q <= 16 (cached).
const QuadRule& gauss_rule(int q);

namespace detail {
[[noreturn]] void throw_nonfinite(double x, double y, int element_index);
}

/// Integrates f over the 1D element [x0, x1]: sum_k w_k * (h/2) * f(x_k).
/// The integrand receives the physical coordinate as a Var plus the
/// reference coordinate in [-1, 1]. A zero-length element yields exactly 0
/// without evaluating f.
template <class F>
ad::Var integrate_interval(ad::Tape& tape, const QuadRule& rule, const ad::Var& x0,
                           const ad::Var& x1, F&& f, int element_index = -1) {
  const double h = x1.value() - x0.value();
  if (h == 0.0) return tape.constant(0.0);
  ad::Var half_h = (x1 - x0) * 0.5;
  ad::Var center = (x0 + x1) * 0.5;
  ad::Var acc = tape.constant(0.0);
  for (int k = 0; k < rule.order(); ++k) {
    const double t = rule.points[static_cast<std::size_t>(k)];
    ad::Var x = center + half_h * t;
    ad::Var v = f(x, t);
    if (!std::isfinite(v.value())) detail::throw_nonfinite(x.value(), 0.0, element_index);
    acc += v * rule.weights[static_cast<std::size_t>(k)];
  }
  return acc * half_h;
}

/// Integrates f over the axis-aligned box [x0,x1] x [y0,y1] with the tensor
/// rule. The integrand receives physical Vars (x, y) plus reference (s, t).
/// Zero-area boxes yield exactly 0 without evaluating f.
template <class F>
ad::Var integrate_box(ad::Tape& tape, const QuadRule& rule, const ad::Var& x0,
                      const ad::Var& x1, const ad::Var& y0, const ad::Var& y1, F&& f,
                      int element_index = -1) {
  const double hx = x1.value() - x0.value();
  const double hy = y1.value() - y0.value();
  if (hx * hy == 0.0) return tape.constant(0.0);
  ad::Var half_hx = (x1 - x0) * 0.5;
  ad::Var half_hy = (y1 - y0) * 0.5;
  ad::Var cx = (x0 + x1) * 0.5;
  ad::Var cy = (y0 + y1) * 0.5;
  ad::Var acc = tape.constant(0.0);
  for (int j = 0; j < rule.order(); ++j) {
    const double s = rule.points[static_cast<std::size_t>(j)];
    ad::Var x = cx + half_hx * s;
    for (int k = 0; k < rule.order(); ++k) {
      const double t = rule.points[static_cast<std::size_t>(k)];
      ad::Var y = cy + half_hy * t;
      ad::Var v = f(x, y, s, t);
      if (!std::isfinite(v.value())) detail::throw_nonfinite(x.value(), y.value(), element_index);
      acc += v * (rule.weights[static_cast<std::size_t>(j)] *
                  rule.weights[static_cast<std::size_t>(k)]);
    }
  }
  return acc * (half_hx * half_hy);
}

/// The 1D Neumann "integral" degenerates to a point evaluation g(x_N) u(x_N).
inline ad::Var integrate_boundary_point(const ad::Var& u_at_point, double g_value) {
  return u_at_point * g_value;
}

/// Integrates g(c) * u(c) along a mesh edge [c0, c1] (one coordinate varies,
/// the other is fixed and baked into g). u varies linearly between the two
/// edge-end nodal values. Zero-length edges yield exactly 0.
template <class G>
ad::Var integrate_edge_linear(ad::Tape& tape, const QuadRule& rule, const ad::Var& c0,
                              const ad::Var& c1, const ad::Var& u0, const ad::Var& u1,
                              G&& g, int element_index = -1) {
  const double h = c1.value() - c0.value();
  if (h == 0.0) return tape.constant(0.0);
  ad::Var half_h = (c1 - c0) * 0.5;
  ad::Var center = (c0 + c1) * 0.5;
  ad::Var acc = tape.constant(0.0);
  for (int k = 0; k < rule.order(); ++k) {
    const double t = rule.points[static_cast<std::size_t>(k)];
    ad::Var c = center + half_h * t;
    ad::Var u = u0 * (0.5 * (1.0 - t)) + u1 * (0.5 * (1.0 + t));
    ad::Var v = g(c) * u;
    if (!std::isfinite(v.value())) detail::throw_nonfinite(c.value(), 0.0, element_index);
    acc += v * rule.weights[static_cast<std::size_t>(k)];
  }
  return acc * half_h;
}

// Plain-double counterparts used by oracles and diagnostics (no tape).

template <class F>
double integrate_interval_value(const QuadRule& rule, double x0, double x1, F&& f) {
  const double h = x1 - x0;
  if (h == 0.0) return 0.0;
  const double c = 0.5 * (x0 + x1);
  double acc = 0.0;
  for (int k = 0; k < rule.order(); ++k)
    acc += rule.weights[static_cast<std::size_t>(k)] *
           f(c + 0.5 * h * rule.points[static_cast<std::size_t>(k)]);
  return acc * 0.5 * h;
}

template <class F>
double integrate_box_value(const QuadRule& rule, double x0, double x1, double y0, double y1,
                           F&& f) {
  const double hx = x1 - x0, hy = y1 - y0;
  if (hx * hy == 0.0) return 0.0;
  const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
  double acc = 0.0;
  for (int j = 0; j < rule.order(); ++j)
    for (int k = 0; k < rule.order(); ++k)
      acc += rule.weights[static_cast<std::size_t>(j)] *
             rule.weights[static_cast<std::size_t>(k)] *
             f(cx + 0.5 * hx * rule.points[static_cast<std::size_t>(j)],
               cy + 0.5 * hy * rule.points[static_cast<std::size_t>(k)]);
  return acc * 0.25 * hx * hy;
}

}  // namespace radapt
