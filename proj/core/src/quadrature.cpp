#include "radapt/quadrature.hpp"

#include <array>
#include <mutex>

namespace radapt {

namespace {

// Newton iteration on the Legendre polynomial, symmetrized. Matches the
// classical tabulated values to machine precision.
QuadRule compute_gauss(int q) {
  QuadRule rule;
  rule.points.assign(static_cast<std::size_t>(q), 0.0);
  rule.weights.assign(static_cast<std::size_t>(q), 0.0);
  const int m = (q + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (q + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < q; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = q * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.points[static_cast<std::size_t>(i)] = -z;
    rule.points[static_cast<std::size_t>(q - 1 - i)] = z;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(q - 1 - i)] = w;
  }
  if (q % 2 == 1) rule.points[static_cast<std::size_t>(q / 2)] = 0.0;
  return rule;
}

constexpr int kMaxOrder = 16;

}  // namespace

const QuadRule& gauss_rule(int q) {
  if (q < 1 || q > kMaxOrder)
    throw std::invalid_argument("gauss_rule: order must be in [1, 16], got " + std::to_string(q));
  static std::array<QuadRule, kMaxOrder> cache;
  static std::once_flag once;
  std::call_once(once, [] {
    for (int i = 1; i <= kMaxOrder; ++i) cache[static_cast<std::size_t>(i - 1)] = compute_gauss(i);
  });
  return cache[static_cast<std::size_t>(q - 1)];
}

namespace detail {
void throw_nonfinite(double x, double y, int element_index) {
  std::string msg = "quadrature: non-finite integrand value at point (" + std::to_string(x);
  msg += ", " + std::to_string(y) + ")";
  if (element_index >= 0) msg += " in element " + std::to_string(element_index);
  throw std::runtime_error(msg);
}
}  // namespace detail

}  // namespace radapt
