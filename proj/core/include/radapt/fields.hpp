#pragma once

#include <functional>

#include "radapt/autodiff.hpp"

namespace radapt {

/// Scalar field over (x, y) evaluable two ways: as plain doubles (oracles,
/// diagnostics, FEM) and recorded on a tape (loss assembly, where the field
/// must stay differentiable in the quadrature-point coordinates). 1D
/// problems ignore the second argument.
struct Field {
  std::function<double(double, double)> value;
  std::function<ad::Var(const ad::Var&, const ad::Var&)> record;

  explicit operator bool() const { return static_cast<bool>(value); }
};

/// Boundary field g(x, n): the point plus the outward unit normal of the
/// edge being integrated. Normals are axis-aligned constants here.
struct BoundaryField {
  std::function<double(double, double, double, double)> value;
  std::function<ad::Var(const ad::Var&, const ad::Var&, double, double)> record;

  explicit operator bool() const { return static_cast<bool>(value); }
};

/// Builds a Field from one generic lambda f(x, y) written against the
/// shared double/Var operator set.
template <class F>
Field make_field(F f) {
  return Field{
      [f](double x, double y) -> double { return f(x, y); },
      [f](const ad::Var& x, const ad::Var& y) -> ad::Var { return f(x, y); },
  };
}

template <class F>
BoundaryField make_boundary_field(F f) {
  return BoundaryField{
      [f](double x, double y, double nx, double ny) -> double { return f(x, y, nx, ny); },
      [f](const ad::Var& x, const ad::Var& y, double nx, double ny) -> ad::Var {
        return f(x, y, nx, ny);
      },
  };
}

}  // namespace radapt
