#pragma once

// Forward-mode dual numbers. A Dual<T> carries a value and a single
// directional derivative; nesting Dual<Dual<T>> gives second directional
// derivatives. Jacobians are assembled one seeded column per pass.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <tuple>
#include <type_traits>

#include <Eigen/Core>

#include "geomint/errors.hpp"

namespace geomint::ad {

template <class T>
struct Dual {
  using value_type = T;

  T val{};
  T der{};

  constexpr Dual() = default;
  constexpr Dual(const T& v) : val(v), der(T(0)) {}  // NOLINT(implicit)
  constexpr Dual(const T& v, const T& d) : val(v), der(d) {}
  template <class U>
    requires(std::is_arithmetic_v<U> && !std::is_same_v<U, T>)
  constexpr Dual(U v) : val(T(v)), der(T(0)) {}  // NOLINT(implicit)

  Dual& operator+=(const Dual& o) { val += o.val; der += o.der; return *this; }
  Dual& operator-=(const Dual& o) { val -= o.val; der -= o.der; return *this; }
  Dual& operator*=(const Dual& o) { *this = *this * o; return *this; }
  Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }

  friend Dual operator+(const Dual& a) { return a; }
  friend Dual operator-(const Dual& a) { return {-a.val, -a.der}; }
  friend Dual operator+(const Dual& a, const Dual& b) { return {a.val + b.val, a.der + b.der}; }
  friend Dual operator-(const Dual& a, const Dual& b) { return {a.val - b.val, a.der - b.der}; }
  friend Dual operator*(const Dual& a, const Dual& b) {
    return {a.val * b.val, a.der * b.val + a.val * b.der};
  }
  friend Dual operator/(const Dual& a, const Dual& b) {
    T inv = T(1) / b.val;
    T q = a.val * inv;
    return {q, (a.der - q * b.der) * inv};
  }
};

// Scalar classification ----------------------------------------------------

template <class S>
struct order_of : std::integral_constant<int, 0> {};
template <class T>
struct order_of<Dual<T>> : std::integral_constant<int, 1 + order_of<T>::value> {};
template <class S>
inline constexpr int order_v = order_of<S>::value;

template <class S>
inline constexpr bool is_dual_v = order_v<S> > 0;

// Highest nesting depth the polymorphic function holders are instantiated for.
inline constexpr int kMaxOrder = 3;

template <class S>
inline constexpr bool has_headroom_v = order_v<S> < kMaxOrder;

using D0 = double;
using D1 = Dual<D0>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;

using OrderExceeded = geomint::DerivativeOrderError;

// Recursively extract the plain double value.
inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& x) { return value_of(x.val); }

// Comparisons look only at the value part.
#define GEOMINT_DUAL_CMP(op)                                                        \
  template <class T>                                                                \
  bool operator op(const Dual<T>& a, const Dual<T>& b) { return value_of(a) op value_of(b); } \
  template <class T, class U>                                                       \
    requires std::is_arithmetic_v<U>                                                \
  bool operator op(const Dual<T>& a, U b) { return value_of(a) op double(b); }     \
  template <class T, class U>                                                       \
    requires std::is_arithmetic_v<U>                                                \
  bool operator op(U a, const Dual<T>& b) { return double(a) op value_of(b); }
GEOMINT_DUAL_CMP(<)
GEOMINT_DUAL_CMP(>)
GEOMINT_DUAL_CMP(<=)
GEOMINT_DUAL_CMP(>=)
GEOMINT_DUAL_CMP(==)
GEOMINT_DUAL_CMP(!=)
#undef GEOMINT_DUAL_CMP

// Mixed arithmetic with plain numbers.
template <class T, class U>
  requires std::is_arithmetic_v<U>
Dual<T> operator+(const Dual<T>& a, U b) { return {a.val + T(b), a.der}; }
template <class T, class U>
  requires std::is_arithmetic_v<U>
Dual<T> operator+(U a, const Dual<T>& b) { return {T(a) + b.val, b.der}; }
template <class T, class U>
  requires std::is_arithmetic_v<U>
Dual<T> operator-(const Dual<T>& a, U b) { return {a.val - T(b), a.der}; }
template <class T, class U>
  requires std::is_arithmetic_v<U>
Dual<T> operator-(U a, const Dual<T>& b) { return {T(a) - b.val, -b.der}; }
template <class T, class U>
  requires std::is_arithmetic_v<U>
Dual<T> operator*(const Dual<T>& a, U b) { return {a.val * T(b), a.der * T(b)}; }
template <class T, class U>
  requires std::is_arithmetic_v<U>
Dual<T> operator*(U a, const Dual<T>& b) { return {T(a) * b.val, T(a) * b.der}; }
template <class T, class U>
  requires std::is_arithmetic_v<U>
Dual<T> operator/(const Dual<T>& a, U b) { return {a.val / T(b), a.der / T(b)}; }
template <class T, class U>
  requires std::is_arithmetic_v<U>
Dual<T> operator/(U a, const Dual<T>& b) { return Dual<T>(T(a)) / b; }

template <class T>
std::ostream& operator<<(std::ostream& os, const Dual<T>& x) {
  return os << '(' << x.val << " + " << x.der << "e)";
}

// Elementary functions. Each has a plain-double overload so generic code can
// call ad::sin(x) regardless of the scalar type.
inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double tan(double x) { return std::tan(x); }
inline double exp(double x) { return std::exp(x); }
inline double log(double x) { return std::log(x); }
inline double sqrt(double x) { return std::sqrt(x); }
inline double abs(double x) { return std::abs(x); }
inline double atan(double x) { return std::atan(x); }
inline double pow(double x, double a) { return std::pow(x, a); }

template <class T>
Dual<T> sin(const Dual<T>& x) { return {sin(x.val), cos(x.val) * x.der}; }
template <class T>
Dual<T> cos(const Dual<T>& x) { return {cos(x.val), -sin(x.val) * x.der}; }
template <class T>
Dual<T> tan(const Dual<T>& x) {
  T t = tan(x.val);
  return {t, (T(1) + t * t) * x.der};
}
template <class T>
Dual<T> exp(const Dual<T>& x) {
  T e = exp(x.val);
  return {e, e * x.der};
}
template <class T>
Dual<T> log(const Dual<T>& x) { return {log(x.val), x.der / x.val}; }
template <class T>
Dual<T> sqrt(const Dual<T>& x) {
  T s = sqrt(x.val);
  return {s, x.der / (T(2) * s)};
}
template <class T>
Dual<T> abs(const Dual<T>& x) { return value_of(x) < 0 ? -x : x; }
template <class T>
Dual<T> atan(const Dual<T>& x) { return {atan(x.val), x.der / (T(1) + x.val * x.val)}; }
template <class T>
Dual<T> pow(const Dual<T>& x, double a) {
  T pa1 = pow(x.val, a - 1.0);
  return {pa1 * x.val, T(a) * pa1 * x.der};
}

// Seeding helpers -----------------------------------------------------------

template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

template <class S>
Vec<Dual<S>> seed(const Vec<S>& x, const Vec<S>& dir) {
  Vec<Dual<S>> out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = Dual<S>(x[i], dir[i]);
  return out;
}

template <class S>
Vec<Dual<S>> seed_unit(const Vec<S>& x, Eigen::Index j) {
  Vec<Dual<S>> out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = Dual<S>(x[i], i == j ? S(1) : S(0));
  return out;
}

template <class S>
Vec<S> values(const Vec<Dual<S>>& x) {
  Vec<S> out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = x[i].val;
  return out;
}

template <class S>
Vec<S> derivs(const Vec<Dual<S>>& x) {
  Vec<S> out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = x[i].der;
  return out;
}

template <class S>
Vec<Dual<S>> combine(const Vec<S>& v, const Vec<S>& d) { return seed(v, d); }

template <class S>
Eigen::VectorXd value_of(const Vec<S>& x) {
  Eigen::VectorXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = value_of(x[i]);
  return out;
}

template <class S, class T>
Vec<S> lift_to(const Vec<T>& x) {
  Vec<S> out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = S(x[i]);
  return out;
}

// Dense solve with partial pivoting that works for any scalar level. Pivots
// are chosen on plain values so nested duals follow the same elimination path.
template <class S>
Vec<S> solve(Mat<S> A, Vec<S> b) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || b.size() != n) throw geomint::RejectedInput("solve: dimension mismatch");
  double scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) scale = std::max(scale, std::abs(value_of(A(i, j))));
  if (scale == 0.0 && n > 0) throw geomint::SingularMatrix("solve: zero matrix");
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index piv = k;
    double best = std::abs(value_of(A(k, k)));
    for (Eigen::Index i = k + 1; i < n; ++i) {
      double a = std::abs(value_of(A(i, k)));
      if (a > best) { best = a; piv = i; }
    }
    if (best <= 1e-14 * scale) throw geomint::SingularMatrix("solve: singular matrix");
    if (piv != k) { A.row(k).swap(A.row(piv)); std::swap(b[k], b[piv]); }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      S f = A(i, k) / A(k, k);
      for (Eigen::Index j = k; j < n; ++j) A(i, j) -= f * A(k, j);
      b[i] -= f * b[k];
    }
  }
  Vec<S> x(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    S acc = b[i];
    for (Eigen::Index j = i + 1; j < n; ++j) acc -= A(i, j) * x[j];
    x[i] = acc / A(i, i);
  }
  return x;
}

template <class S>
Mat<S> inverse(const Mat<S>& A) {
  const Eigen::Index n = A.rows();
  Mat<S> out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Vec<S> e = Vec<S>::Zero(n);
    e[j] = S(1);
    out.col(j) = solve<S>(A, e);
  }
  return out;
}

// Polymorphic function holders ------------------------------------------------
//
// A generic callable is instantiated once per supported scalar type and kept
// behind std::function, so maps and systems can be stored by value and still
// be differentiated to any depth up to kMaxOrder.

template <class S>
using VecSig = std::function<Vec<S>(const Vec<S>&)>;
template <class S>
using ScalarSig = std::function<S(const Vec<S>&)>;

class VectorFn {
 public:
  VectorFn() = default;

  template <class F>
    requires(!std::same_as<std::remove_cvref_t<F>, VectorFn> &&
             std::invocable<const F&, const Vec<D0>&>)
  VectorFn(F f)  // NOLINT(implicit)
      : fns_{VecSig<D0>(f), VecSig<D1>(f), VecSig<D2>(f), VecSig<D3>(f)} {}

  template <class S>
  Vec<S> operator()(const Vec<S>& x) const {
    if constexpr (order_v<S> > kMaxOrder) {
      throw OrderExceeded();
    } else {
      return std::get<order_v<S>>(fns_)(x);
    }
  }

  explicit operator bool() const { return static_cast<bool>(std::get<0>(fns_)); }

 private:
  std::tuple<VecSig<D0>, VecSig<D1>, VecSig<D2>, VecSig<D3>> fns_;
};

class ScalarFn {
 public:
  ScalarFn() = default;

  template <class F>
    requires(!std::same_as<std::remove_cvref_t<F>, ScalarFn> &&
             std::invocable<const F&, const Vec<D0>&>)
  ScalarFn(F f)  // NOLINT(implicit)
      : fns_{ScalarSig<D0>(f), ScalarSig<D1>(f), ScalarSig<D2>(f), ScalarSig<D3>(f)} {}

  template <class S>
  S operator()(const Vec<S>& x) const {
    if constexpr (order_v<S> > kMaxOrder) {
      throw OrderExceeded();
    } else {
      return std::get<order_v<S>>(fns_)(x);
    }
  }

  explicit operator bool() const { return static_cast<bool>(std::get<0>(fns_)); }

 private:
  std::tuple<ScalarSig<D0>, ScalarSig<D1>, ScalarSig<D2>, ScalarSig<D3>> fns_;
};

// Scalar type of an Eigen vector argument inside generic lambdas.
template <class V>
using scalar_t = typename std::remove_cvref_t<V>::Scalar;

// Differentiation drivers ---------------------------------------------------

/// J(i, j) = d f_i / d x_j at the scalar level S; evaluates f at Dual<S>.
template <class S>
Mat<S> jacobian(const VectorFn& f, const Vec<S>& x) {
  if constexpr (!has_headroom_v<S>) {
    throw OrderExceeded();
  } else {
    Mat<S> J;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      Vec<Dual<S>> y = f(seed_unit(x, j));
      if (j == 0) J.resize(y.size(), x.size());
      for (Eigen::Index i = 0; i < y.size(); ++i) J(i, j) = y[i].der;
    }
    return J;
  }
}

/// Directional derivative Df(x)·dir in a single pass.
template <class S>
Vec<S> directional(const VectorFn& f, const Vec<S>& x, const Vec<S>& dir) {
  if constexpr (!has_headroom_v<S>) {
    throw OrderExceeded();
  } else {
    return derivs(f(seed(x, dir)));
  }
}

template <class S>
Vec<S> gradient(const ScalarFn& f, const Vec<S>& x) {
  if constexpr (!has_headroom_v<S>) {
    throw OrderExceeded();
  } else {
    Vec<S> g(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) g[j] = f(seed_unit(x, j)).der;
    return g;
  }
}

/// Hessian-vector product H(x)·dir by nesting a directional dual around the
/// gradient.
template <class S>
Vec<S> second_derivative(const ScalarFn& f, const Vec<S>& x, const Vec<S>& dir) {
  if constexpr (order_v<S> + 2 > kMaxOrder) {
    throw OrderExceeded();
  } else {
    Vec<Dual<S>> xd = seed(x, dir);
    return derivs(gradient<Dual<S>>(f, xd));
  }
}

// Plain-double conveniences.
inline Eigen::MatrixXd jacobian_fwd(const VectorFn& f, const Eigen::VectorXd& x) {
  return jacobian<double>(f, x);
}

}  // namespace geomint::ad

namespace Eigen {

template <class T>
struct NumTraits<geomint::ad::Dual<T>> : NumTraits<double> {
  using Real = geomint::ad::Dual<T>;
  using NonInteger = geomint::ad::Dual<T>;
  using Nested = geomint::ad::Dual<T>;
  using Literal = geomint::ad::Dual<T>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 3,
    MulCost = 3
  };
};

template <class T, typename BinaryOp>
struct ScalarBinaryOpTraits<geomint::ad::Dual<T>, double, BinaryOp> {
  using ReturnType = geomint::ad::Dual<T>;
};
template <class T, typename BinaryOp>
struct ScalarBinaryOpTraits<double, geomint::ad::Dual<T>, BinaryOp> {
  using ReturnType = geomint::ad::Dual<T>;
};

}  // namespace Eigen
