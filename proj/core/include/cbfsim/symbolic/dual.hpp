#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace cbfsim::sym {

/// Forward-mode dual number carrying a value and a dynamic vector of partial
/// derivatives. An empty derivative vector means "constant" (all partials
/// zero); binary operations broadcast it against seeded operands, so plain
/// double literals mix freely with seeded variables.
///
/// Nesting Dual<Dual<...>> yields higher derivative orders; the library
/// instantiates levels 1..4 (see fields.hpp).
template <class T>
struct Dual {
  T v{};
  std::vector<T> d;

  Dual() = default;
  Dual(double c) : v(c) {}  // NOLINT: implicit by design, lifts constants
  Dual(T value, std::vector<T> deriv) : v(std::move(value)), d(std::move(deriv)) {}

  friend Dual operator+(const Dual& a, const Dual& b) {
    Dual r;
    r.v = a.v + b.v;
    combine(r, a, b, [](const T& x, const T& y) { return x + y; });
    return r;
  }
  friend Dual operator-(const Dual& a, const Dual& b) {
    Dual r;
    r.v = a.v - b.v;
    combine(r, a, b, [](const T& x, const T& y) { return x - y; });
    return r;
  }
  friend Dual operator*(const Dual& a, const Dual& b) {
    Dual r;
    r.v = a.v * b.v;
    combine(r, a, b, [&](const T& da, const T& db) { return da * b.v + a.v * db; });
    return r;
  }
  friend Dual operator/(const Dual& a, const Dual& b) {
    Dual r;
    r.v = a.v / b.v;
    const T bb = b.v * b.v;
    combine(r, a, b, [&](const T& da, const T& db) { return (da * b.v - a.v * db) / bb; });
    return r;
  }
  friend Dual operator-(const Dual& a) {
    Dual r;
    r.v = -a.v;
    r.d.reserve(a.d.size());
    for (const T& x : a.d) r.d.push_back(-x);
    return r;
  }
  friend Dual operator+(const Dual& a) { return a; }

 private:
  template <class Op>
  static void combine(Dual& r, const Dual& a, const Dual& b, Op op) {
    const std::size_t n = a.d.size() > b.d.size() ? a.d.size() : b.d.size();
    static const T zero{};
    r.d.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const T& da = i < a.d.size() ? a.d[i] : zero;
      const T& db = i < b.d.size() ? b.d[i] : zero;
      r.d[i] = op(da, db);
    }
  }
};

using Dual1 = Dual<double>;
using Dual2 = Dual<Dual1>;
using Dual3 = Dual<Dual2>;
using Dual4 = Dual<Dual3>;

inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& x) {
  return value_of(x.v);
}

inline bool is_identically_zero(double x) { return x == 0.0; }
template <class T>
bool is_identically_zero(const Dual<T>& x) {
  if (!is_identically_zero(x.v)) return false;
  for (const T& e : x.d)
    if (!is_identically_zero(e)) return false;
  return true;
}

/// True when x carries no derivative information (structurally constant).
template <class T>
bool has_zero_derivative(const Dual<T>& x) {
  for (const T& e : x.d)
    if (!is_identically_zero(e)) return false;
  return true;
}

namespace detail {
template <class T, class F>
Dual<T> chain(const Dual<T>& x, T value, T dfdx, F) {
  Dual<T> r;
  r.v = std::move(value);
  r.d.reserve(x.d.size());
  for (const T& e : x.d) r.d.push_back(dfdx * e);
  return r;
}
}  // namespace detail

template <class T>
Dual<T> sin(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return detail::chain(x, T(sin(x.v)), T(cos(x.v)), 0);
}
template <class T>
Dual<T> cos(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return detail::chain(x, T(cos(x.v)), T(-sin(x.v)), 0);
}
template <class T>
Dual<T> tan(const Dual<T>& x) {
  using std::cos;
  using std::tan;
  const T c = cos(x.v);
  return detail::chain(x, T(tan(x.v)), T(T(1.0) / (c * c)), 0);
}
template <class T>
Dual<T> exp(const Dual<T>& x) {
  using std::exp;
  const T e = exp(x.v);
  return detail::chain(x, e, e, 0);
}
template <class T>
Dual<T> log(const Dual<T>& x) {
  using std::log;
  return detail::chain(x, T(log(x.v)), T(T(1.0) / x.v), 0);
}
template <class T>
Dual<T> sqrt(const Dual<T>& x) {
  using std::sqrt;
  const T s = sqrt(x.v);
  return detail::chain(x, s, T(T(0.5) / s), 0);
}

/// sign(y) = +1 for y >= 0, -1 otherwise. The +1 at zero matches the
/// right-hand derivative convention for abs.
inline double sign(double x) { return x >= 0.0 ? 1.0 : -1.0; }
template <class T>
Dual<T> sign(const Dual<T>& x) {
  return Dual<T>(value_of(x) >= 0.0 ? 1.0 : -1.0);
}

template <class T>
Dual<T> abs(const Dual<T>& x) {
  return value_of(x) >= 0.0 ? x : -x;
}

template <class T>
Dual<T> pow(const Dual<T>& base, const Dual<T>& expo) {
  using std::pow;
  if (has_zero_derivative(expo)) {
    const double c = value_of(expo);
    if (c == 0.0) return Dual<T>(1.0);
    if (c == 1.0) return base;
    Dual<T> r;
    r.v = pow(base.v, expo.v);
    const T dfdx = expo.v * pow(base.v, expo.v - T(1.0));
    r.d.reserve(base.d.size());
    for (const T& e : base.d) r.d.push_back(dfdx * e);
    return r;
  }
  return exp(expo * log(base));
}
template <class T>
Dual<T> pow(const Dual<T>& base, double expo) {
  return pow(base, Dual<T>(expo));
}

/// min/max select the argument with the smaller/larger value; ties keep the
/// first argument, NaN propagates.
template <class T>
Dual<T> min(const Dual<T>& a, const Dual<T>& b) {
  if (std::isnan(value_of(a))) return a;
  if (std::isnan(value_of(b))) return b;
  return value_of(b) < value_of(a) ? b : a;
}
template <class T>
Dual<T> max(const Dual<T>& a, const Dual<T>& b) {
  if (std::isnan(value_of(a))) return a;
  if (std::isnan(value_of(b))) return b;
  return value_of(b) > value_of(a) ? b : a;
}

/// Lift a state vector into dual space with unit seeds e_i.
template <class S>
std::vector<Dual<S>> seed(std::span<const S> x) {
  std::vector<Dual<S>> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i].v = x[i];
    out[i].d.assign(x.size(), S(0.0));
    out[i].d[i] = S(1.0);
  }
  return out;
}

/// Gradient of a natively coded scalar function via one forward pass.
/// `fn` must be callable as fn(std::span<const Dual1>) -> Dual1 using only
/// the primitives defined above.
template <class F>
Eigen::VectorXd gradient(F&& fn, const Eigen::VectorXd& x) {
  const auto n = static_cast<std::size_t>(x.size());
  std::vector<Dual1> xs = seed(std::span<const double>(x.data(), n));
  Dual1 y = fn(std::span<const Dual1>(xs.data(), xs.size()));
  Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
  for (std::size_t i = 0; i < y.d.size() && i < n; ++i) g[static_cast<Eigen::Index>(i)] = y.d[i];
  return g;
}

}  // namespace cbfsim::sym
