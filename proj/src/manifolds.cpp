#include "geomint/manifolds.hpp"

#include <cmath>
#include <random>

namespace geomint {

using ad::scalar_t;

namespace {

template <class S>
using M3 = Eigen::Matrix<S, 3, 3>;
template <class S>
using V3 = Eigen::Matrix<S, 3, 1>;

template <class S>
M3<S> hat_t(const V3<S>& a) {
  M3<S> M;
  M << S(0), -a[2], a[1], a[2], S(0), -a[0], -a[1], a[0], S(0);
  return M;
}

template <class S>
V3<S> vee_t(const M3<S>& M) {
  V3<S> v;
  v << (M(2, 1) - M(1, 2)) * 0.5, (M(0, 2) - M(2, 0)) * 0.5, (M(1, 0) - M(0, 1)) * 0.5;
  return v;
}

template <class S>
M3<S> inv3(const M3<S>& M) {
  M3<S> C;
  C(0, 0) = M(1, 1) * M(2, 2) - M(1, 2) * M(2, 1);
  C(0, 1) = M(0, 2) * M(2, 1) - M(0, 1) * M(2, 2);
  C(0, 2) = M(0, 1) * M(1, 2) - M(0, 2) * M(1, 1);
  C(1, 0) = M(1, 2) * M(2, 0) - M(1, 0) * M(2, 2);
  C(1, 1) = M(0, 0) * M(2, 2) - M(0, 2) * M(2, 0);
  C(1, 2) = M(0, 2) * M(1, 0) - M(0, 0) * M(1, 2);
  C(2, 0) = M(1, 0) * M(2, 1) - M(1, 1) * M(2, 0);
  C(2, 1) = M(0, 1) * M(2, 0) - M(0, 0) * M(2, 1);
  C(2, 2) = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
  S det = M(0, 0) * C(0, 0) + M(0, 1) * C(1, 0) + M(0, 2) * C(2, 0);
  if (std::abs(ad::value_of(det)) < 1e-14) throw SingularMatrix("3x3 inverse: singular matrix");
  return C / det;
}

template <class S>
M3<S> cay_t(const V3<S>& a) {
  M3<S> I = M3<S>::Identity();
  M3<S> A = hat_t<S>(a) * 0.5;
  return inv3<S>(M3<S>(I - A)) * (I + A);
}

template <class S>
V3<S> cay_inv_t(const M3<S>& R) {
  M3<S> I = M3<S>::Identity();
  return vee_t<S>(M3<S>(inv3<S>(M3<S>(I + R)) * (R - I) * 2.0));
}

template <class S>
M3<S> body_jacobian_t(const V3<S>& a) {
  M3<S> I = M3<S>::Identity();
  M3<S> A = hat_t<S>(a) * 0.5;
  M3<S> L = inv3<S>(M3<S>(I + A)), R = inv3<S>(M3<S>(I - A));
  M3<S> B;
  for (int j = 0; j < 3; ++j) {
    V3<S> e = V3<S>::Zero();
    e[j] = S(1);
    B.col(j) = vee_t<S>(M3<S>(L * hat_t<S>(e) * R));
  }
  return B;
}

template <class S>
S norm_checked(const V3<S>& u, const char* what) {
  S s = u.dot(u);
  if (ad::value_of(s) < 1e-24) throw DomainViolation(std::string(what) + ": vanishing denominator");
  return ad::sqrt(s);
}

DomainGuard radius_guard(double radius) {
  return [radius](const Vector&, const Vector& v) { return v.norm() <= radius; };
}

}  // namespace

// Sphere ---------------------------------------------------------------------------

DiscretizationMap sphere_projection_map(double radius) {
  MapDef def;
  def.name = "sphere-projection";
  def.dim = 3;
  def.guard = radius_guard(radius);
  def.pair = [](const auto& z) {
    using S = scalar_t<decltype(z)>;
    V3<S> x = z.head(3), xi = z.tail(3);
    V3<S> u = x - 0.5 * xi, w = x + 0.5 * xi;
    Vec<S> out(6);
    out << u / norm_checked<S>(u, "sphere-projection"), w / norm_checked<S>(w, "sphere-projection");
    return out;
  };
  def.inverse = [](const auto& X) {
    using S = scalar_t<decltype(X)>;
    V3<S> x0 = X.head(3), x1 = X.tail(3);
    V3<S> s = x0 + x1;
    S a = 2.0 / norm_checked<S>(s, "sphere-projection inverse");
    Vec<S> out(6);
    out << a * s * 0.5, a * (x1 - x0);
    return out;
  };
  return DiscretizationMap(std::move(def));
}

DiscretizationMap sphere_one_sided_map(double radius) {
  MapDef def;
  def.name = "sphere-one-sided";
  def.dim = 3;
  def.guard = radius_guard(radius);
  def.pair = [](const auto& z) {
    using S = scalar_t<decltype(z)>;
    V3<S> x = z.head(3), xi = z.tail(3);
    V3<S> w = x + xi;
    Vec<S> out(6);
    out << x, w / norm_checked<S>(w, "sphere-one-sided");
    return out;
  };
  def.inverse = [](const auto& X) {
    using S = scalar_t<decltype(X)>;
    V3<S> x0 = X.head(3), x1 = X.tail(3);
    S c = x0.dot(x1);
    if (ad::value_of(c) <= 0) throw DomainViolation("sphere-one-sided inverse: x0 . x1 <= 0");
    Vec<S> out(6);
    out << x0, x1 / c - x0;
    return out;
  };
  return DiscretizationMap(std::move(def));
}

DiscretizationMap sphere_exp_map(double radius) {
  MapDef def;
  def.name = "sphere-exp";
  def.dim = 3;
  def.guard = radius_guard(radius);
  def.pair = [](const auto& z) {
    using S = scalar_t<decltype(z)>;
    V3<S> x = z.head(3), xi = z.tail(3);
    S s = xi.dot(xi);
    S c, sn;  // cos(|xi|/2) and sin(|xi|/2)/|xi|
    if (ad::value_of(s) < 1.0) {
      c = S(0);
      sn = S(0);
      S pw = S(1);
      double fc = 1.0, fs = 0.5;  // 1/(4^k (2k)!) and 1/(2^(2k+1) (2k+1)!)
      for (int k = 0; k < 12; ++k) {
        double sign = (k % 2) ? -1.0 : 1.0;
        c += sign * fc * pw;
        sn += sign * fs * pw;
        pw = pw * s;
        fc /= 4.0 * (2 * k + 1) * (2 * k + 2);
        fs /= 4.0 * (2 * k + 2) * (2 * k + 3);
      }
    } else {
      S r = ad::sqrt(s);
      c = ad::cos(r * 0.5);
      sn = ad::sin(r * 0.5) / r;
    }
    Vec<S> out(6);
    out << c * x - sn * xi, c * x + sn * xi;
    return out;
  };
  def.inverse = [](const auto& X) {
    using S = scalar_t<decltype(X)>;
    V3<S> x0 = X.head(3), x1 = X.tail(3);
    V3<S> sum = x0 + x1, diff = x1 - x0;
    S c = norm_checked<S>(sum, "sphere-exp inverse") * 0.5;
    S y2 = diff.dot(diff) * 0.25 / (c * c);
    S f;  // atan(y)/y with y = |x1 - x0| / |x0 + x1|
    if (ad::value_of(y2) < 1e-4) {
      f = 1.0 - y2 / 3.0 + y2 * y2 / 5.0 - y2 * y2 * y2 / 7.0 + y2 * y2 * y2 * y2 / 9.0;
    } else {
      S y = ad::sqrt(y2);
      f = ad::atan(y) / y;
    }
    Vec<S> out(6);
    out << sum / (2.0 * c), diff * (f / c);
    return out;
  };
  return DiscretizationMap(std::move(def));
}

Matrix sphere_tangent_basis(const Vector& x) {
  Eigen::Vector3d n = Eigen::Vector3d(x).normalized();
  Eigen::Vector3d ref = std::abs(n[0]) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  Eigen::Vector3d t1 = (ref - ref.dot(n) * n).normalized();
  Eigen::Vector3d t2 = n.cross(t1);
  Matrix E(3, 2);
  E << t1, t2;
  return E;
}

std::vector<TangentPoint> sphere_samples(int count, std::uint64_t seed, double vel_scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<TangentPoint> out;
  for (int k = 0; k < count; ++k) {
    Eigen::Vector3d x(g(rng), g(rng), g(rng));
    x.normalize();
    Eigen::Vector3d v(g(rng), g(rng), g(rng));
    v -= v.dot(x) * x;
    v = v.normalized() * vel_scale * u(rng);
    out.push_back({Vector(x), Vector(v)});
  }
  return out;
}

SphereCotangent sphere_hamiltonian_step(const HamiltonianDef& H, const SphereCotangent& s, double h,
                                        bool reproject, const NewtonConfig& cfg, SphereStepInfo* info) {
  if (H.dim != 3) throw RejectedInput("sphere_hamiltonian_step: H must act on ambient (x; p) in R^3 x R^3");
  check_length(s.x, 3, "sphere_hamiltonian_step x");
  check_length(s.p, 3, "sphere_hamiltonian_step p");
  if (std::abs(s.x.norm() - 1.0) > 1e-10) throw RejectedInput("sphere_hamiltonian_step: |x| != 1");
  if (std::abs(s.x.dot(s.p)) > 1e-10) throw RejectedInput("sphere_hamiltonian_step: x . p != 0");
  const Vector x = s.x, pk = s.p;
  const Matrix E = sphere_tangent_basis(x);
  auto hf = H.h_of;

  auto equations = [hf, x, pk, h]<class S>(const Vec<S>& u) {
    V3<S> y = u.head(3), p1 = u.tail(3);
    V3<S> xs = ad::lift_to<S>(x), ps = ad::lift_to<S>(pk);
    S c = xs.dot(y);
    if (ad::value_of(c) <= 0) throw DomainViolation("sphere_hamiltonian_step: x_k . x_{k+1} <= 0");
    S py = p1.dot(y);
    V3<S> w = c * (p1 - py * y + c * py * xs);
    Vec<S> g = ad::gradient<S>(hf, stack<S>(Vec<S>(xs), Vec<S>(w)));
    V3<S> A = y / c - xs - h * V3<S>(g.tail(3));
    V3<S> B = -ps + c * p1 + h * V3<S>(g.head(3));
    return std::pair<V3<S>, V3<S>>(A, B);
  };

  ad::VectorFn F = [equations, E](const auto& u) {
    using S = scalar_t<decltype(u)>;
    if constexpr (!ad::has_headroom_v<S>) {
      throw DerivativeOrderError();
      return Vec<S>();
    } else {
      auto [A, B] = equations(Vec<S>(u));
      V3<S> y = u.head(3);
      Vec<S> r(6);
      r << A.dot(ad::lift_to<S>(Vector(E.col(0)))), A.dot(ad::lift_to<S>(Vector(E.col(1)))), y.dot(y) - 1.0, B;
      return r;
    }
  };

  Vector g0 = ad::gradient<double>(hf, stack<double>(x, pk));
  Vector guess(6);
  guess << (x + h * g0.tail(3)).normalized(), pk;
  long before = newton_iteration_counter();
  Vector u = newton_solve(F, guess, cfg).x;

  Vector y = u.head(3), p1 = u.tail(3);
  if (x.dot(y) <= 0) throw DomainViolation("sphere_hamiltonian_step: x_k . x_{k+1} <= 0");
  if (info) {
    auto [A, B] = equations(u);
    info->iterations = static_cast<int>(newton_iteration_counter() - before);
    info->normal_residual = std::abs(x.dot(Vector(A)));
    info->norm_drift = std::abs(y.norm() - 1.0);
    info->tangency_drift = std::abs(y.dot(p1));
  }
  if (reproject) {
    y.normalize();
    p1 -= p1.dot(y) * y;
  }
  return {y, p1};
}

HamiltonianDef sphere_chart_free_hamiltonian() {
  return {2, [](const auto& z) {
            auto s = ad::sin(z[0]);
            return (z[2] * z[2] + z[3] * z[3] / (s * s)) * 0.5;
          }};
}

SphereCotangent sphere_from_chart(const Vector& qp) {
  check_length(qp, 4, "sphere_from_chart");
  double th = qp[0], ph = qp[1];
  Eigen::Vector3d x(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
  Eigen::Vector3d et(std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -std::sin(th));
  Eigen::Vector3d ep(-std::sin(ph), std::cos(ph), 0.0);
  return {Vector(x), Vector(qp[2] * et + qp[3] / std::sin(th) * ep)};
}

Vector sphere_to_chart(const SphereCotangent& s) {
  check_length(s.x, 3, "sphere_to_chart x");
  double th = std::acos(std::clamp(s.x[2], -1.0, 1.0)), ph = std::atan2(s.x[1], s.x[0]);
  Eigen::Vector3d et(std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -std::sin(th));
  Eigen::Vector3d ep(-std::sin(ph), std::cos(ph), 0.0);
  Vector out(4);
  out << th, ph, Eigen::Vector3d(s.p).dot(et), std::sin(th) * Eigen::Vector3d(s.p).dot(ep);
  return out;
}

// SO(3) ---------------------------------------------------------------------------------

Eigen::Matrix3d hat(const Eigen::Vector3d& a) { return hat_t<double>(a); }
Eigen::Vector3d vee(const Eigen::Matrix3d& M) { return vee_t<double>(M); }
Eigen::Matrix3d cay(const Eigen::Vector3d& a) { return cay_t<double>(a); }
Eigen::Vector3d cay_inv(const Eigen::Matrix3d& R) { return cay_inv_t<double>(R); }
Eigen::Matrix3d cayley_body_jacobian(const Eigen::Vector3d& a) { return body_jacobian_t<double>(a); }

DiscretizationMap so3_cayley_map(double radius) {
  MapDef def;
  def.name = "so3-cayley";
  def.dim = 3;
  def.guard = radius_guard(radius);
  def.pair = [](const auto& z) {
    using S = scalar_t<decltype(z)>;
    V3<S> a = z.head(3), xi = z.tail(3);
    V3<S> om = body_jacobian_t<S>(a) * xi;
    M3<S> C = cay_t<S>(a);
    V3<S> half = om * 0.5;
    V3<S> x0 = cay_inv_t<S>(M3<S>(C * cay_t<S>(V3<S>(-half))));
    V3<S> x1 = cay_inv_t<S>(M3<S>(C * cay_t<S>(half)));
    Vec<S> out(6);
    out << x0, x1;
    return out;
  };
  return DiscretizationMap(std::move(def));
}

std::pair<Eigen::Matrix3d, Eigen::Matrix3d> so3_group_pair(const Eigen::Matrix3d& A, const Eigen::Vector3d& a,
                                                           const Eigen::Vector3d& xi) {
  Vector z(6);
  z << a, xi;
  Vector x = so3_cayley_map(INFINITY).eval<double>(z);
  return {A * cay(x.head(3)), A * cay(x.tail(3))};
}

HamiltonianDef rigid_body_hamiltonian(const Eigen::Vector3d& inertia) {
  if ((inertia.array() <= 0).any()) throw RejectedInput("rigid_body_hamiltonian: inertia must be positive");
  return {3, [inertia](const auto& z) {
            using S = scalar_t<decltype(z)>;
            V3<S> a = z.head(3), p = z.tail(3);
            V3<S> pi = inv3<S>(M3<S>(body_jacobian_t<S>(a).transpose())) * p;
            S e = S(0);
            for (int i = 0; i < 3; ++i) e += pi[i] * pi[i] / inertia[i];
            return S(0.5 * e);
          }};
}

Eigen::Matrix3d attitude(const RigidBodyState& s) { return s.anchor * cay(s.a); }

Eigen::Vector3d body_momentum(const RigidBodyState& s) {
  return cayley_body_jacobian(s.a).transpose().inverse() * Eigen::Vector3d(s.p);
}

RigidBodyState rigid_body_from_body(const Eigen::Matrix3d& R, const Eigen::Vector3d& pi) {
  return {R, Vector::Zero(3), Vector(pi)};
}

RigidBodyState rigid_body_step(const HamiltonianDef& H, const RigidBodyState& s, double h, double reanchor_radius,
                               const NewtonConfig& cfg) {
  static const DiscretizationMap chart = so3_cayley_map(INFINITY);
  CotangentPoint next = hamiltonian_step(chart, H, s.a, s.p, h, cfg);
  RigidBodyState out{s.anchor, next.q, next.p};
  if (out.a.norm() > reanchor_radius) out = rigid_body_from_body(attitude(out), body_momentum(out));
  return out;
}

}  // namespace geomint
