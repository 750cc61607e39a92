#include "geomint/core.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace geomint {

using ad::scalar_t;

void check_length(const Vector& x, int n, const char* what) {
  if (x.size() != n) {
    std::ostringstream os;
    os << what << ": expected length " << n << ", got " << x.size();
    throw RejectedInput(os.str());
  }
  if (!x.allFinite()) throw RejectedInput(std::string(what) + ": non-finite entries");
}

DiscretizationMap::DiscretizationMap(MapDef def) {
  if (def.dim <= 0) throw RejectedInput("discretization map: dimension must be positive");
  if (!def.pair) throw RejectedInput("discretization map: missing pair function");
  def_ = std::make_shared<const MapDef>(std::move(def));
}

bool DiscretizationMap::in_domain(const Vector& q, const Vector& v) const {
  return !def_->guard || def_->guard(q, v);
}

Vector DiscretizationMap::newton_inverse(const Vector& x) const {
  const int n = dim();
  auto def = def_;
  Vector target = x;
  ad::VectorFn F = [def, target](const auto& z) {
    using S = scalar_t<decltype(z)>;
    Vec<S> r = def->pair(Vec<S>(z));
    for (Eigen::Index i = 0; i < r.size(); ++i) r[i] -= target[i];
    return r;
  };
  Vector guess(2 * n);
  guess << x.head(n), x.tail(n) - x.head(n);
  try {
    return newton_solve(F, guess, def_->newton).x;
  } catch (const ConvergenceFailure& e) {
    throw NoInverse(name() + ": " + e.what(), e.residual());
  } catch (const SingularMatrix& e) {
    throw NoInverse(name() + ": " + e.what(), INFINITY);
  }
}

PointPair eval_pair(const DiscretizationMap& map, const TangentPoint& z) {
  const int n = map.dim();
  check_length(z.q, n, "eval_pair q");
  check_length(z.v, n, "eval_pair v");
  if (!map.in_domain(z.q, z.v)) throw DomainViolation(map.name() + ": point outside domain");
  Vector x = map.eval<double>(stack<double>(z.q, z.v));
  return {x.head(n), x.tail(n)};
}

TangentPoint invert(const DiscretizationMap& map, const Vector& x0, const Vector& x1) {
  const int n = map.dim();
  check_length(x0, n, "invert x0");
  check_length(x1, n, "invert x1");
  Vector x = stack<double>(x0, x1);
  Vector z = map.invert<double>(x);
  double res = (map.eval<double>(z) - x).lpNorm<Eigen::Infinity>();
  if (!std::isfinite(res) || res > 1e-8 * (1.0 + x.lpNorm<Eigen::Infinity>()))
    throw NoInverse(map.name() + ": inverse does not reproduce the pair", res);
  return {z.head(n), z.tail(n)};
}

Matrix jacobian(const DiscretizationMap& map, const TangentPoint& z) {
  const int n = map.dim();
  check_length(z.q, n, "jacobian q");
  check_length(z.v, n, "jacobian v");
  if (!map.in_domain(z.q, z.v)) throw DomainViolation(map.name() + ": point outside domain");
  Vector s = stack<double>(z.q, z.v);
  if (map.has_jacobian()) return map.def().jacobian(s);
  return map.jacobian_at<double>(s);
}

Retraction euclidean_retraction(int n) {
  return {"euclidean", n, [n](const auto& z) {
            using S = scalar_t<decltype(z)>;
            return Vec<S>(z.head(n) + z.tail(n));
          }};
}

DiscretizationMap from_retraction(const Retraction& r, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw RejectedInput("from_retraction: theta must lie in [0,1]");
  const int n = r.dim;
  auto rf = r.r;
  MapDef def;
  std::ostringstream os;
  os << r.name << "-theta(" << theta << ")";
  def.name = os.str();
  def.dim = n;
  def.pair = [n, rf, theta](const auto& z) {
    using S = scalar_t<decltype(z)>;
    Vec<S> q = z.head(n), v = z.tail(n);
    Vec<S> a = stack<S>(q, Vec<S>(-theta * v));
    Vec<S> b = stack<S>(q, Vec<S>((1.0 - theta) * v));
    return stack<S>(rf(a), rf(b));
  };
  return DiscretizationMap(std::move(def));
}

DiscretizationMap adjoint(const DiscretizationMap& map) {
  const int n = map.dim();
  MapDef def;
  def.name = "adjoint(" + map.name() + ")";
  def.dim = n;
  def.newton = map.def().newton;
  def.pair = [map, n](const auto& z) {
    using S = scalar_t<decltype(z)>;
    Vec<S> x = map.eval<S>(stack<S>(Vec<S>(z.head(n)), Vec<S>(-z.tail(n))));
    return stack<S>(Vec<S>(x.tail(n)), Vec<S>(x.head(n)));
  };
  def.inverse = [map, n](const auto& x) {
    using S = scalar_t<decltype(x)>;
    Vec<S> z = map.invert<S>(stack<S>(Vec<S>(x.tail(n)), Vec<S>(x.head(n))));
    return stack<S>(Vec<S>(z.head(n)), Vec<S>(-z.tail(n)));
  };
  if (map.has_jacobian()) {
    def.jacobian = [map, n](const Vector& z) {
      Vector zm(2 * n);
      zm << z.head(n), -z.tail(n);
      Matrix J = map.def().jacobian(zm);
      Matrix out(2 * n, 2 * n);
      out.topLeftCorner(n, n) = J.bottomLeftCorner(n, n);
      out.topRightCorner(n, n) = -J.bottomRightCorner(n, n);
      out.bottomLeftCorner(n, n) = J.topLeftCorner(n, n);
      out.bottomRightCorner(n, n) = -J.topRightCorner(n, n);
      return out;
    };
  }
  if (map.def().guard) {
    auto g = map.def().guard;
    def.guard = [g](const Vector& q, const Vector& v) { return g(q, -v); };
  }
  return DiscretizationMap(std::move(def));
}

SymmetryReport is_symmetric(const DiscretizationMap& map, const std::vector<TangentPoint>& samples,
                            double tol) {
  const int n = map.dim();
  SymmetryReport rep;
  for (const auto& s : samples) {
    Vector a = map.eval<double>(stack<double>(s.q, s.v));
    Vector b = map.eval<double>(stack<double>(s.q, Vector(-s.v)));
    Vector swapped = stack<double>(b.tail(n), b.head(n));
    rep.max_deviation = std::max(rep.max_deviation, (a - swapped).lpNorm<1>());
  }
  rep.symmetric = rep.max_deviation < tol;
  return rep;
}

namespace {

ValidityReport validate_impl(const DiscretizationMap& map, const std::vector<TangentPoint>& samples,
                             const std::function<Matrix(const Vector&)>& basis, double tol) {
  const int n = map.dim();
  ValidityReport rep;
  for (const auto& s : samples) {
    Vector z0 = stack<double>(s.q, Vector(Vector::Zero(n)));
    Vector x = map.eval<double>(z0);
    rep.identity_residual = std::max(
        {rep.identity_residual, (x.head(n) - s.q).lpNorm<Eigen::Infinity>(),
         (x.tail(n) - s.q).lpNorm<Eigen::Infinity>()});

    Matrix J = map.jacobian_at<double>(z0);
    Matrix D = J.bottomRightCorner(n, n) - J.topRightCorner(n, n);
    double dev;
    if (basis) {
      Matrix E = basis(s.q);
      dev = (D * E - E).lpNorm<Eigen::Infinity>();
    } else {
      dev = (D - Matrix::Identity(n, n)).lpNorm<Eigen::Infinity>();
    }
    rep.derivative_residual = std::max(rep.derivative_residual, dev);

    Vector z = stack<double>(s.q, s.v);
    if (map.has_inverse()) {
      rep.inverse_checked = true;
      Vector xz = map.eval<double>(z);
      double r;
      try {
        r = (map.eval<double>(map.invert<double>(xz)) - xz).lpNorm<Eigen::Infinity>();
      } catch (const NumericalFailure&) {
        r = INFINITY;
      }
      if (!std::isfinite(r)) r = INFINITY;
      rep.inverse_residual = std::max(rep.inverse_residual, r);
    }
    if (map.has_jacobian()) {
      rep.jacobian_checked = true;
      Matrix Ja = map.def().jacobian(z);
      Matrix Jd = map.jacobian_at<double>(z);
      double rel = (Ja - Jd).lpNorm<Eigen::Infinity>() / std::max(1.0, Jd.lpNorm<Eigen::Infinity>());
      rep.jacobian_residual = std::max(rep.jacobian_residual, rel);
    }
  }
  rep.passed = rep.identity_residual < tol && rep.derivative_residual < tol &&
               (!rep.inverse_checked || rep.inverse_residual < tol) &&
               (!rep.jacobian_checked || rep.jacobian_residual < 1e-8);
  return rep;
}

}  // namespace

ValidityReport validate(const DiscretizationMap& map, const std::vector<TangentPoint>& samples,
                        double tol) {
  return validate_impl(map, samples, {}, tol);
}

ValidityReport validate_constrained(const DiscretizationMap& map,
                                    const std::vector<TangentPoint>& samples,
                                    const std::function<Matrix(const Vector&)>& tangent_basis,
                                    double tol) {
  return validate_impl(map, samples, tangent_basis, tol);
}

DiscretizationMap theta_map(int n, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw RejectedInput("theta_map: theta must lie in [0,1]");
  MapDef def;
  std::ostringstream os;
  os << "theta(" << theta << ")";
  def.name = os.str();
  def.dim = n;
  def.pair = [n, theta](const auto& z) {
    using S = scalar_t<decltype(z)>;
    Vec<S> q = z.head(n), v = z.tail(n);
    return stack<S>(Vec<S>(q - theta * v), Vec<S>(q + (1.0 - theta) * v));
  };
  def.inverse = [n, theta](const auto& x) {
    using S = scalar_t<decltype(x)>;
    Vec<S> v = x.tail(n) - x.head(n);
    return stack<S>(Vec<S>(x.head(n) + theta * v), v);
  };
  def.jacobian = [n, theta](const Vector&) {
    Matrix J(2 * n, 2 * n);
    Matrix I = Matrix::Identity(n, n);
    J << I, -theta * I, I, (1.0 - theta) * I;
    return J;
  };
  return DiscretizationMap(std::move(def));
}

namespace {
DiscretizationMap renamed(DiscretizationMap m, const std::string& name) {
  MapDef def = m.def();
  def.name = name;
  return DiscretizationMap(std::move(def));
}
}  // namespace

DiscretizationMap midpoint_map(int n) { return renamed(theta_map(n, 0.5), "midpoint"); }
DiscretizationMap explicit_euler_map(int n) { return renamed(theta_map(n, 0.0), "explicit-euler"); }
DiscretizationMap symplectic_euler_map(int n) {
  return renamed(theta_map(n, 1.0), "symplectic-euler");
}

std::vector<TangentPoint> random_samples(int n, int count, std::uint64_t seed, double vel_scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<TangentPoint> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    TangentPoint t{Vector(n), Vector(n)};
    for (int i = 0; i < n; ++i) t.q[i] = u(rng);
    for (int i = 0; i < n; ++i) t.v[i] = vel_scale * u(rng);
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace geomint
