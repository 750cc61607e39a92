#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "geomint/autodiff.hpp"
#include "geomint/errors.hpp"
#include "geomint/newton.hpp"

namespace geomint {

struct TangentPoint {
  Vector q;
  Vector v;
};

struct PointPair {
  Vector x0;
  Vector x1;
};

using DomainGuard = std::function<bool(const Vector& q, const Vector& v)>;
using AnalyticJacobian = std::function<Matrix(const Vector& z)>;

// Everything a discretization map needs. `pair` acts on the stacked vector
// (q; v) of length 2n and returns (R1; R2). `inverse`, `jacobian` and `guard`
// are optional.
struct MapDef {
  std::string name;
  int dim = 0;
  ad::VectorFn pair;
  ad::VectorFn inverse;
  AnalyticJacobian jacobian;
  DomainGuard guard;
  NewtonConfig newton;
};

class DiscretizationMap {
 public:
  DiscretizationMap() = default;
  explicit DiscretizationMap(MapDef def);

  const std::string& name() const { return def_->name; }
  int dim() const { return def_->dim; }
  const MapDef& def() const { return *def_; }
  bool has_inverse() const { return static_cast<bool>(def_->inverse); }
  bool has_jacobian() const { return static_cast<bool>(def_->jacobian); }
  bool in_domain(const Vector& q, const Vector& v) const;

  // Stacked evaluation (q; v) -> (x0; x1) at any scalar level.
  template <class S>
  Vec<S> eval(const Vec<S>& z) const {
    return def_->pair(z);
  }

  // Stacked inverse (x0; x1) -> (q; v). Uses the analytic inverse when there
  // is one; otherwise Newton on plain values and the implicit function theorem
  // for derivative parts.
  template <class S>
  Vec<S> invert(const Vec<S>& x) const {
    if (def_->inverse) return def_->inverse(x);
    if constexpr (ad::order_v<S> == 0) {
      return newton_inverse(x);
    } else {
      using T = typename S::value_type;
      Vec<T> z = invert<T>(ad::values(x));
      Mat<T> J = jacobian_at<T>(z);
      return ad::combine<T>(z, ad::solve<T>(J, ad::derivs(x)));
    }
  }

  // AD Jacobian of the stacked map at any level that has headroom.
  template <class S>
  Mat<S> jacobian_at(const Vec<S>& z) const {
    return ad::jacobian<S>(def_->pair, z);
  }

 private:
  Vector newton_inverse(const Vector& x) const;
  std::shared_ptr<const MapDef> def_;
};

// Public operations on maps --------------------------------------------------

PointPair eval_pair(const DiscretizationMap& map, const TangentPoint& z);
TangentPoint invert(const DiscretizationMap& map, const Vector& x0, const Vector& x1);
Matrix jacobian(const DiscretizationMap& map, const TangentPoint& z);

struct Retraction {
  std::string name;
  int dim = 0;
  ad::VectorFn r;  // stacked (x; v) -> point
};

Retraction euclidean_retraction(int n);

DiscretizationMap from_retraction(const Retraction& r, double theta);
DiscretizationMap adjoint(const DiscretizationMap& map);

struct SymmetryReport {
  bool symmetric = false;
  double max_deviation = 0.0;
};

// sup |R(z) - swap(R(q,-v))| in the 1-norm over the samples.
SymmetryReport is_symmetric(const DiscretizationMap& map, const std::vector<TangentPoint>& samples,
                            double tol = 1e-10);

struct ValidityReport {
  double identity_residual = 0.0;    // max |R(q,0) - (q,q)|
  double derivative_residual = 0.0;  // max |(dR2/dv - dR1/dv)(q,0) - Id|
  double inverse_residual = 0.0;     // max |R(R^-1(R(z))) - R(z)|, analytic inverse only
  double jacobian_residual = 0.0;    // max relative gap analytic vs AD Jacobian
  bool inverse_checked = false;
  bool jacobian_checked = false;
  bool passed = false;
};

// Base points are the q of each sample; the velocities feed the inverse and
// Jacobian checks.
ValidityReport validate(const DiscretizationMap& map, const std::vector<TangentPoint>& samples,
                        double tol = 1e-9);

// Same checks for maps on an embedded manifold: property 2 is tested only on
// the columns of tangent_basis(q).
ValidityReport validate_constrained(const DiscretizationMap& map,
                                    const std::vector<TangentPoint>& samples,
                                    const std::function<Matrix(const Vector&)>& tangent_basis,
                                    double tol = 1e-9);

// Built-in flat maps ------------------------------------------------------------

// (q - theta v, q + (1 - theta) v) with closed-form inverse and Jacobian.
DiscretizationMap theta_map(int n, double theta);
DiscretizationMap midpoint_map(int n);
DiscretizationMap explicit_euler_map(int n);    // (q, q + v)
DiscretizationMap symplectic_euler_map(int n);  // (q - v, q)

// Uniform samples with q in [-1,1]^n and v in [-vel_scale, vel_scale]^n.
std::vector<TangentPoint> random_samples(int n, int count, std::uint64_t seed, double vel_scale = 1.0);

// Helpers for stacked vectors.
template <class S>
Vec<S> stack(const Vec<S>& a, const Vec<S>& b) {
  Vec<S> out(a.size() + b.size());
  out << a, b;
  return out;
}

void check_length(const Vector& x, int n, const char* what);

}  // namespace geomint
