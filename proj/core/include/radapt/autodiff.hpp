#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace radapt::ad {

class Tape;
class Gradient;

// Primitive operations recorded on the tape. Ops suffixed _c carry a plain
// double in the aux slot instead of a second operand.
enum class Op : std::uint8_t {
  leaf,
  constant,
  add,
  sub,
  mul,
  div,
  atan2v,
  neg,
  absv,
  sqrtv,
  expv,
  logv,
  sinv,
  cosv,
  atanv,
  sigmoidv,
  add_c,
  rsub_c,
  mul_c,
  rdiv_c,
  pow_c,
};

/// Handle to one scalar recorded on a Tape. Cheap to copy. A Var is valid
/// only against the tape that created it and only until that tape is
/// cleared.
class Var {
public:
  Var() = default;

  double value() const noexcept { return val_; }
  Tape* tape() const noexcept { return tape_; }
  std::int32_t index() const noexcept { return idx_; }

private:
  friend class Tape;
  friend class Gradient;
  Var(Tape* t, std::int32_t i, double v) : tape_(t), idx_(i), val_(v) {}

  Tape* tape_ = nullptr;
  std::int32_t idx_ = -1;
  double val_ = 0.0;
};

/// Adjoints of every tape node with respect to one output, as produced by
/// Tape::backward. Nodes recorded after the output, or not reachable from
/// it, carry adjoint zero.
class Gradient {
public:
  double operator[](const Var& v) const {
    if (v.tape_ != tape_)
      throw std::invalid_argument("Gradient: variable belongs to a different tape");
    if (static_cast<std::size_t>(v.idx_) >= adj_.size())
      throw std::invalid_argument("Gradient: variable was recorded after backward()");
    return adj_[static_cast<std::size_t>(v.idx_)];
  }

private:
  friend class Tape;
  Gradient(const Tape* t, std::vector<double> adj) : tape_(t), adj_(std::move(adj)) {}

  const Tape* tape_;
  std::vector<double> adj_;
};

/// Append-only record of a scalar forward pass. Operand indices are always
/// smaller than the node that references them, so one reverse sweep
/// propagates adjoints exactly.
class Tape {
public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  std::size_t size() const noexcept { return nodes_.size(); }

  // Drops all nodes but keeps capacity; every Var from before is invalid.
  void clear() noexcept {
    nodes_.clear();
    vals_.clear();
  }

  void reserve(std::size_t n) {
    nodes_.reserve(n);
    vals_.reserve(n);
  }

  Var leaf(double v) { return push(Op::leaf, v, -1, 0.0, -1, 0.0); }
  Var constant(double v) { return push(Op::constant, v, -1, 0.0, -1, 0.0); }

  std::vector<Var> leaves(std::span<const double> values) {
    std::vector<Var> out;
    out.reserve(values.size());
    for (double v : values) out.push_back(leaf(v));
    return out;
  }

  Var record(Op op, double value, const Var& a, double da) {
    check(a);
    return push(op, value, a.idx_, da, -1, 0.0);
  }

  Var record(Op op, double value, const Var& a, double da, const Var& b, double db) {
    check(a);
    check(b);
    return push(op, value, a.idx_, da, b.idx_, db);
  }

  // Unary op with a plain-double parameter (stored so replay() can recompute).
  Var record_aux(Op op, double value, const Var& a, double da, double aux) {
    check(a);
    return push(op, value, a.idx_, da, -1, aux);
  }

  /// Reverse sweep from `output`; returns the adjoint of every node.
  Gradient backward(const Var& output) const;

  /// Recomputes every forward value from the recorded ops. Matches the
  /// stored values bit-exactly; used to validate tape integrity.
  std::vector<double> replay() const;

  double stored_value(std::int32_t idx) const { return vals_[static_cast<std::size_t>(idx)]; }

private:
  struct Node {
    double da, db;
    std::int32_t a, b;
    Op op;
  };

  void check(const Var& v) const {
    if (v.tape_ != this)
      throw std::invalid_argument("autodiff: operand recorded on a different tape");
  }

  Var push(Op op, double v, std::int32_t a, double da, std::int32_t b, double db) {
    nodes_.push_back(Node{da, db, a, b, op});
    vals_.push_back(v);
    return Var(this, static_cast<std::int32_t>(vals_.size()) - 1, v);
  }

  std::vector<Node> nodes_;
  std::vector<double> vals_;
};

namespace detail {
inline Tape& tape_of(const Var& v) {
  if (!v.tape()) throw std::invalid_argument("autodiff: default-constructed variable used in an expression");
  return *v.tape();
}
// Gradient of sqrt clamped to 0 near zero so losses built from vanishing
// residuals do not poison the whole gradient with NaN/inf.
constexpr double sqrt_guard = 1e-30;
}  // namespace detail

inline Var operator+(const Var& a, const Var& b) {
  return detail::tape_of(a).record(Op::add, a.value() + b.value(), a, 1.0, b, 1.0);
}
inline Var operator+(const Var& a, double c) {
  return detail::tape_of(a).record_aux(Op::add_c, a.value() + c, a, 1.0, c);
}
inline Var operator+(double c, const Var& a) { return a + c; }

inline Var operator-(const Var& a, const Var& b) {
  return detail::tape_of(a).record(Op::sub, a.value() - b.value(), a, 1.0, b, -1.0);
}
inline Var operator-(const Var& a, double c) {
  return detail::tape_of(a).record_aux(Op::add_c, a.value() - c, a, 1.0, -c);
}
inline Var operator-(double c, const Var& a) {
  return detail::tape_of(a).record_aux(Op::rsub_c, c - a.value(), a, -1.0, c);
}
inline Var operator-(const Var& a) {
  return detail::tape_of(a).record(Op::neg, -a.value(), a, -1.0);
}

inline Var operator*(const Var& a, const Var& b) {
  return detail::tape_of(a).record(Op::mul, a.value() * b.value(), a, b.value(), b, a.value());
}
inline Var operator*(const Var& a, double c) {
  return detail::tape_of(a).record_aux(Op::mul_c, a.value() * c, a, c, c);
}
inline Var operator*(double c, const Var& a) { return a * c; }

inline Var operator/(const Var& a, const Var& b) {
  const double v = a.value() / b.value();
  return detail::tape_of(a).record(Op::div, v, a, 1.0 / b.value(), b, -v / b.value());
}
inline Var operator/(const Var& a, double c) { return a * (1.0 / c); }
inline Var operator/(double c, const Var& a) {
  const double v = c / a.value();
  return detail::tape_of(a).record_aux(Op::rdiv_c, v, a, -v / a.value(), c);
}

inline Var& operator+=(Var& a, const Var& b) { return a = a + b; }
inline Var& operator-=(Var& a, const Var& b) { return a = a - b; }
inline Var& operator*=(Var& a, const Var& b) { return a = a * b; }
inline Var& operator+=(Var& a, double c) { return a = a + c; }
inline Var& operator*=(Var& a, double c) { return a = a * c; }

/// |x| with subgradient 0 at x = 0.
inline Var abs(const Var& a) {
  const double x = a.value();
  const double d = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
  return detail::tape_of(a).record(Op::absv, std::abs(x), a, d);
}

/// sqrt with the gradient clamped to 0 when the argument is below 1e-30.
inline Var sqrt(const Var& a) {
  const double x = a.value();
  const double v = std::sqrt(x);
  const double d = x < detail::sqrt_guard ? 0.0 : 0.5 / v;
  return detail::tape_of(a).record(Op::sqrtv, v, a, d);
}

inline Var exp(const Var& a) {
  const double v = std::exp(a.value());
  return detail::tape_of(a).record(Op::expv, v, a, v);
}

inline Var log(const Var& a) {
  return detail::tape_of(a).record(Op::logv, std::log(a.value()), a, 1.0 / a.value());
}

inline Var sin(const Var& a) {
  return detail::tape_of(a).record(Op::sinv, std::sin(a.value()), a, std::cos(a.value()));
}

inline Var cos(const Var& a) {
  return detail::tape_of(a).record(Op::cosv, std::cos(a.value()), a, -std::sin(a.value()));
}

inline Var atan(const Var& a) {
  const double x = a.value();
  return detail::tape_of(a).record(Op::atanv, std::atan(x), a, 1.0 / (1.0 + x * x));
}

inline Var atan2(const Var& y, const Var& x) {
  const double r2 = x.value() * x.value() + y.value() * y.value();
  return detail::tape_of(y).record(Op::atan2v, std::atan2(y.value(), x.value()),
                                   y, x.value() / r2, x, -y.value() / r2);
}

/// x^e for a constant exponent e.
inline Var pow(const Var& a, double e) {
  const double x = a.value();
  return detail::tape_of(a).record_aux(Op::pow_c, std::pow(x, e), a, e * std::pow(x, e - 1.0), e);
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline Var sigmoid(const Var& a) {
  const double s = sigmoid(a.value());
  return detail::tape_of(a).record(Op::sigmoidv, s, a, s * (1.0 - s));
}

// min/max select an existing variable, so adjoints route through the branch
// taken in the forward pass. Ties pick the first argument.
inline Var min(const Var& a, const Var& b) { return a.value() <= b.value() ? a : b; }
inline Var max(const Var& a, const Var& b) { return a.value() >= b.value() ? a : b; }

inline Var min(const Var& a, double c) {
  return a.value() <= c ? a : detail::tape_of(a).constant(c);
}
inline Var max(const Var& a, double c) {
  return a.value() >= c ? a : detail::tape_of(a).constant(c);
}

inline Var clamp(const Var& a, double lo, double hi) {
  if (a.value() < lo) return detail::tape_of(a).constant(lo);
  if (a.value() > hi) return detail::tape_of(a).constant(hi);
  return a;
}

/// Stable sort by forward value. The result holds the same variables in
/// sorted order, so the Jacobian of the map is exactly the forward
/// permutation; ties keep their original relative order.
inline std::vector<Var> sorted_by_value(std::vector<Var> xs) {
  std::stable_sort(xs.begin(), xs.end(),
                   [](const Var& u, const Var& v) { return u.value() < v.value(); });
  return xs;
}

/// Max over parameters of |autodiff - central difference| / max(1, |central difference|)
/// for a scalar function recorded as f(tape, vars).
template <class F>
double grad_check(F&& f, std::span<const double> params, double h) {
  Tape tape;
  std::vector<Var> vars = tape.leaves(params);
  Var out = f(tape, std::span<const Var>(vars));
  if (!std::isfinite(out.value()))
    throw std::runtime_error("grad_check: non-finite forward value");
  Gradient grad = tape.backward(out);

  std::vector<double> p(params.begin(), params.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double saved = p[i];
    p[i] = saved + h;
    Tape tp;
    std::vector<Var> vp = tp.leaves(p);
    const double fp = f(tp, std::span<const Var>(vp)).value();
    p[i] = saved - h;
    Tape tm;
    std::vector<Var> vm = tm.leaves(p);
    const double fm = f(tm, std::span<const Var>(vm)).value();
    p[i] = saved;
    const double fd = (fp - fm) / (2.0 * h);
    const double dev = std::abs(grad[vars[i]] - fd) / std::max(1.0, std::abs(fd));
    worst = std::max(worst, dev);
  }
  return worst;
}

}  // namespace radapt::ad
