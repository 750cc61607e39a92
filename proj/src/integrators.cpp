#include "geomint/integrators.hpp"

#include <cmath>
#include <sstream>

namespace geomint {

using ad::scalar_t;

namespace {

template <class S>
Vec<S> lift(const Vector& x) {
  return ad::lift_to<S>(x);
}

template <class S>
Vec<S> cat4(const auto& a, const auto& b, const auto& c, const auto& d) {
  Vec<S> out(a.size() + b.size() + c.size() + d.size());
  out << a, b, c, d;
  return out;
}

void check_dims(int expected, int got, const char* what) {
  if (expected != got) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << expected << " vs " << got << ")";
    throw RejectedInput(os.str());
  }
}

// Fiber derivative dL/dv at any level with headroom.
template <class S>
Vec<S> fiber_derivative(const LagrangianDef& L, const Vec<S>& q, const Vec<S>& v) {
  if (L.legendre) return L.legendre(stack<S>(q, v));
  if constexpr (!ad::has_headroom_v<S>) {
    throw DerivativeOrderError();
    return Vec<S>();
  } else {
    const Eigen::Index n = q.size();
    Vec<S> z = stack<S>(q, v);
    Vec<S> g(n);
    for (Eigen::Index j = 0; j < n; ++j) g[j] = L.l_of(ad::seed_unit<S>(z, n + j)).der;
    return g;
  }
}

template <class S>
Vec<S> fiber_derivative_inverse(const LagrangianDef& L, const Vec<S>& q, const Vec<S>& p) {
  if (L.legendre_inv) return L.legendre_inv(stack<S>(q, p));
  const Eigen::Index n = q.size();
  if constexpr (ad::order_v<S> == 0) {
    ad::VectorFn F = [L, q, p](const auto& v) {
      using T = scalar_t<decltype(v)>;
      return Vec<T>(fiber_derivative<T>(L, lift<T>(q), Vec<T>(v)) - lift<T>(p));
    };
    try {
      return newton_solve(F, p, L.newton).x;
    } catch (const NumericalFailure& e) {
      throw NumericalFailure(std::string("Legendre inversion failed: ") + e.what());
    }
  } else {
    using T = typename S::value_type;
    Vec<T> qv = ad::values(q), pv = ad::values(p);
    Vec<T> v = fiber_derivative_inverse<T>(L, qv, pv);
    Vec<T> z = stack<T>(qv, v);
    Mat<T> J(n, 2 * n);
    for (Eigen::Index j = 0; j < 2 * n; ++j)
      J.col(j) = ad::derivs(fiber_derivative<ad::Dual<T>>(L, Vec<ad::Dual<T>>(ad::seed_unit<T>(z, j).head(n)),
                                                          Vec<ad::Dual<T>>(ad::seed_unit<T>(z, j).tail(n))));
    Vec<T> rhs = ad::derivs(p) - Mat<T>(J.leftCols(n)) * ad::derivs(q);
    return ad::combine<T>(v, ad::solve<T>(Mat<T>(J.rightCols(n)), rhs));
  }
}

}  // namespace

Vector hamiltonian_field(const HamiltonianDef& H, const Vector& qp) {
  const int n = H.dim;
  Vector g = ad::gradient<double>(H.h_of, qp);
  Vector out(2 * n);
  out << g.tail(n), -g.head(n);
  return out;
}

Vector ode_step(const DiscretizationMap& map, const VectorFieldDef& X, const Vector& xk, double h,
                const NewtonConfig& cfg) {
  const int n = map.dim();
  check_dims(n, X.dim, "ode_step");
  check_length(xk, n, "ode_step xk");
  auto xf = X.x_of;
  ad::VectorFn F = [map, xf, xk, h, n](const auto& z) {
    using S = scalar_t<decltype(z)>;
    Vec<S> zz = z;
    Vec<S> x = map.eval<S>(stack<S>(zz, Vec<S>(h * xf(zz))));
    return Vec<S>(x.head(n) - lift<S>(xk));
  };
  Vector z = newton_solve(F, xk, cfg).x;
  Vector zh = stack<double>(z, Vector(h * xf(z)));
  return map.eval<double>(zh).tail(n);
}

namespace {

template <class S>
Vec<S> scaled_sode_field(const ad::VectorFn& gamma, const Vec<S>& qv, double h) {
  const Eigen::Index n = qv.size() / 2;
  return stack<S>(Vec<S>(h * qv.tail(n)), Vec<S>(h * gamma(qv)));
}

Vector sode_guess(const SodeDef& G, const Vector& qk, const Vector& vk, double h) {
  Vector a = G.gamma(stack<double>(qk, vk));
  return stack<double>(Vector(qk + h * vk), Vector(vk + h * a));
}

}  // namespace

TangentPoint sode_step_endpoint(const DiscretizationMap& map_tq, const SodeDef& G, const Vector& qk,
                                const Vector& vk, double h, const NewtonConfig& cfg) {
  const int n = G.dim;
  check_dims(2 * n, map_tq.dim(), "sode_step_endpoint");
  check_length(qk, n, "sode_step_endpoint qk");
  check_length(vk, n, "sode_step_endpoint vk");
  Vector zk = stack<double>(qk, vk);
  Vector target = map_tq.eval<double>(stack<double>(zk, scaled_sode_field<double>(G.gamma, zk, h))).tail(2 * n);
  auto gamma = G.gamma;
  ad::VectorFn F = [map_tq, gamma, target, h, n](const auto& y) {
    using S = scalar_t<decltype(y)>;
    Vec<S> yy = y;
    Vec<S> x = map_tq.eval<S>(stack<S>(yy, scaled_sode_field<S>(gamma, yy, h)));
    return Vec<S>(x.head(2 * n) - lift<S>(target));
  };
  Vector y = newton_solve(F, sode_guess(G, qk, vk, h), cfg).x;
  return {y.head(n), y.tail(n)};
}

TangentPoint sode_step_midbase(const DiscretizationMap& map_tq, const SodeDef& G, const Vector& qk,
                               const Vector& vk, double h, const NewtonConfig& cfg) {
  const int n = G.dim;
  check_dims(2 * n, map_tq.dim(), "sode_step_midbase");
  check_length(qk, n, "sode_step_midbase qk");
  check_length(vk, n, "sode_step_midbase vk");
  Vector zk = stack<double>(qk, vk);
  auto gamma = G.gamma;
  ad::VectorFn F = [map_tq, gamma, zk, h, n](const auto& y) {
    using S = scalar_t<decltype(y)>;
    Vec<S> w = map_tq.invert<S>(stack<S>(lift<S>(zk), Vec<S>(y)));
    Vec<S> base = w.head(2 * n);
    return Vec<S>(w.tail(2 * n) - scaled_sode_field<S>(gamma, base, h));
  };
  Vector y = newton_solve(F, sode_guess(G, qk, vk, h), cfg).x;
  return {y.head(n), y.tail(n)};
}

namespace {

Vector hamiltonian_guess(const HamiltonianDef& H, const Vector& qk, const Vector& pk, double h) {
  Vector x = stack<double>(qk, pk);
  return x + h * hamiltonian_field(H, x);
}

}  // namespace

CotangentPoint hamiltonian_step(const DiscretizationMap& map, const HamiltonianDef& H, const Vector& qk,
                                const Vector& pk, double h, const NewtonConfig& cfg) {
  const int n = map.dim();
  check_dims(n, H.dim, "hamiltonian_step");
  check_length(qk, n, "hamiltonian_step qk");
  check_length(pk, n, "hamiltonian_step pk");
  DiscretizationMap C = cotangent_lift(map);
  auto hf = H.h_of;
  ad::VectorFn F = [C, hf, qk, pk, h, n](const auto& y) {
    using S = scalar_t<decltype(y)>;
    if constexpr (!ad::has_headroom_v<S>) {
      throw DerivativeOrderError();
      return Vec<S>();
    } else {
      Vec<S> Z = C.invert<S>(cat4<S>(lift<S>(qk), lift<S>(pk), y.head(n), y.tail(n)));
      Vec<S> g = ad::gradient<S>(hf, Vec<S>(Z.head(2 * n)));
      Vec<S> r(2 * n);
      r << Z.segment(2 * n, n) - h * g.tail(n), Z.segment(3 * n, n) + h * g.head(n);
      return r;
    }
  };
  Vector y = newton_solve(F, hamiltonian_guess(H, qk, pk, h), cfg).x;
  return {y.head(n), y.tail(n)};
}

CotangentPoint hamiltonian_step_endpoint_nonsymplectic(const DiscretizationMap& map,
                                                       const HamiltonianDef& H, const Vector& qk,
                                                       const Vector& pk, double h,
                                                       const NewtonConfig& cfg) {
  const int n = map.dim();
  check_dims(n, H.dim, "hamiltonian_step_endpoint_nonsymplectic");
  check_length(qk, n, "endpoint qk");
  check_length(pk, n, "endpoint pk");
  DiscretizationMap C = cotangent_lift(map);
  auto hf = H.h_of;
  auto field = [hf, h, n]<class S>(const Vec<S>& x) {
    Vec<S> g = ad::gradient<S>(hf, x);
    return stack<S>(Vec<S>(h * g.tail(n)), Vec<S>(-h * g.head(n)));
  };
  Vector xk = stack<double>(qk, pk);
  Vector target = C.eval<double>(stack<double>(xk, field(xk))).tail(2 * n);
  ad::VectorFn F = [C, field, target, n](const auto& y) {
    using S = scalar_t<decltype(y)>;
    if constexpr (!ad::has_headroom_v<S>) {
      throw DerivativeOrderError();
      return Vec<S>();
    } else {
      Vec<S> yy = y;
      Vec<S> x = C.eval<S>(stack<S>(yy, field(yy)));
      return Vec<S>(x.head(2 * n) - lift<S>(target));
    }
  };
  Vector y = newton_solve(F, hamiltonian_guess(H, qk, pk, h), cfg).x;
  return {y.head(n), y.tail(n)};
}

Vector legendre(const LagrangianDef& L, const Vector& q, const Vector& v) {
  check_length(q, L.dim, "legendre q");
  check_length(v, L.dim, "legendre v");
  return fiber_derivative<double>(L, q, v);
}

Vector legendre_inverse(const LagrangianDef& L, const Vector& q, const Vector& p) {
  check_length(q, L.dim, "legendre_inverse q");
  check_length(p, L.dim, "legendre_inverse p");
  return fiber_derivative_inverse<double>(L, q, p);
}

HamiltonianDef legendre_hamiltonian(const LagrangianDef& L) {
  const int n = L.dim;
  HamiltonianDef H;
  H.dim = n;
  H.h_of = [L, n](const auto& z) {
    using S = scalar_t<decltype(z)>;
    Vec<S> q = z.head(n), p = z.tail(n);
    Vec<S> v = fiber_derivative_inverse<S>(L, q, p);
    return S(p.dot(v) - L.l_of(stack<S>(q, v)));
  };
  return H;
}

TangentPoint lagrangian_step(const DiscretizationMap& map, const LagrangianDef& L, const Vector& qk,
                             const Vector& vk, double h, const NewtonConfig& cfg) {
  check_dims(map.dim(), L.dim, "lagrangian_step");
  Vector pk = legendre(L, qk, vk);
  CotangentPoint next = hamiltonian_step(map, legendre_hamiltonian(L), qk, pk, h, cfg);
  return {next.q, legendre_inverse(L, next.q, next.p)};
}

DiscretizationMap lagrangian_lift(const DiscretizationMap& map, const LagrangianDef& L) {
  const int n = map.dim();
  check_dims(n, L.dim, "lagrangian_lift");
  DiscretizationMap C = cotangent_lift(map);
  MapDef def;
  def.name = "L(" + map.name() + ")";
  def.dim = 2 * n;
  def.pair = [C, L, n](const auto& z) {
    using S = scalar_t<decltype(z)>;
    if constexpr (!ad::has_headroom_v<S>) {
      throw DerivativeOrderError();
      return Vec<S>();
    } else {
      // TFL in one directional pass.
      Vec<S> base = z.head(2 * n), dir = z.tail(2 * n);
      Vec<ad::Dual<S>> w = ad::seed<S>(base, dir);
      Vec<ad::Dual<S>> p = fiber_derivative<ad::Dual<S>>(L, Vec<ad::Dual<S>>(w.head(n)),
                                                         Vec<ad::Dual<S>>(w.tail(n)));
      Vec<S> x = C.eval<S>(cat4<S>(base.head(n), ad::values(p), dir.head(n), ad::derivs(p)));
      Vec<S> q0 = x.segment(0, n), p0 = x.segment(n, n), q1 = x.segment(2 * n, n), p1 = x.segment(3 * n, n);
      return cat4<S>(q0, fiber_derivative_inverse<S>(L, q0, p0), q1, fiber_derivative_inverse<S>(L, q1, p1));
    }
  };
  return DiscretizationMap(std::move(def));
}

ad::ScalarFn discrete_lagrangian(const DiscretizationMap& map, const LagrangianDef& L, double h) {
  const int n = map.dim();
  check_dims(n, L.dim, "discrete_lagrangian");
  if (!(h != 0.0)) throw RejectedInput("discrete_lagrangian: h must be nonzero");
  auto lf = L.l_of;
  return [map, lf, h, n](const auto& x) {
    using S = scalar_t<decltype(x)>;
    Vec<S> z = map.invert<S>(Vec<S>(x));
    return S(h * lf(stack<S>(Vec<S>(z.head(n)), Vec<S>(z.tail(n) / h))));
  };
}

namespace {

template <class S>
Vec<S> d1_discrete_lagrangian(const ad::ScalarFn& Ld, const Vec<S>& q0, const Vec<S>& q1) {
  const Eigen::Index n = q0.size();
  return Vec<S>(ad::gradient<S>(Ld, stack<S>(q0, q1)).head(n));
}

}  // namespace

Vector variational_step(const DiscretizationMap& map, const LagrangianDef& L, const Vector& q_prev,
                        const Vector& qk, double h, const NewtonConfig& cfg) {
  const int n = map.dim();
  check_length(q_prev, n, "variational_step q_prev");
  check_length(qk, n, "variational_step qk");
  ad::ScalarFn Ld = discrete_lagrangian(map, L, h);
  Vector d2 = ad::gradient<double>(Ld, stack<double>(q_prev, qk)).tail(n);
  ad::VectorFn F = [Ld, qk, d2](const auto& y) {
    using S = scalar_t<decltype(y)>;
    if constexpr (!ad::has_headroom_v<S>) {
      throw DerivativeOrderError();
      return Vec<S>();
    } else {
      return Vec<S>(d1_discrete_lagrangian<S>(Ld, lift<S>(qk), Vec<S>(y)) + lift<S>(d2));
    }
  };
  return newton_solve(F, Vector(2 * qk - q_prev), cfg).x;
}

CotangentPoint momentum_match(const DiscretizationMap& map, const LagrangianDef& L, const Vector& qk,
                              const Vector& pk, double h, const NewtonConfig& cfg) {
  const int n = map.dim();
  check_length(qk, n, "momentum_match qk");
  check_length(pk, n, "momentum_match pk");
  ad::ScalarFn Ld = discrete_lagrangian(map, L, h);
  ad::VectorFn F = [Ld, qk, pk](const auto& y) {
    using S = scalar_t<decltype(y)>;
    if constexpr (!ad::has_headroom_v<S>) {
      throw DerivativeOrderError();
      return Vec<S>();
    } else {
      return Vec<S>(d1_discrete_lagrangian<S>(Ld, lift<S>(qk), Vec<S>(y)) + lift<S>(pk));
    }
  };
  Vector guess = qk + h * legendre_inverse(L, qk, pk);
  Vector q1 = newton_solve(F, guess, cfg).x;
  Vector p1 = ad::gradient<double>(Ld, stack<double>(qk, q1)).tail(n);
  return {q1, p1};
}

DiscretizationMap newmark_map(double gamma, double beta, double h, int n) {
  const double c = 0.5 * h * (gamma - 2.0 * beta);
  MapDef def;
  std::ostringstream os;
  os << "newmark(" << gamma << "," << beta << ")";
  def.name = os.str();
  def.dim = 2 * n;
  def.pair = [n, gamma, c](const auto& z) {
    using S = scalar_t<decltype(z)>;
    Vec<S> q = z.segment(0, n), v = z.segment(n, n), qd = z.segment(2 * n, n), vd = z.segment(3 * n, n);
    return cat4<S>(q - 0.5 * qd + c * vd, v - gamma * vd, q + 0.5 * qd + c * vd, v + (1.0 - gamma) * vd);
  };
  def.inverse = [n, gamma, c](const auto& x) {
    using S = scalar_t<decltype(x)>;
    Vec<S> a0 = x.segment(0, n), b0 = x.segment(n, n), a1 = x.segment(2 * n, n), b1 = x.segment(3 * n, n);
    Vec<S> vd = b1 - b0, qd = a1 - a0;
    return cat4<S>(a0 + 0.5 * qd - c * vd, b0 + gamma * vd, qd, vd);
  };
  def.jacobian = [n, gamma, c](const Vector&) {
    Matrix I = Matrix::Identity(n, n), O = Matrix::Zero(n, n);
    Matrix J(4 * n, 4 * n);
    J << I, O, -0.5 * I, c * I,  //
        O, I, O, -gamma * I,     //
        I, O, 0.5 * I, c * I,    //
        O, I, O, (1.0 - gamma) * I;
    return J;
  };
  return DiscretizationMap(std::move(def));
}

double sode_commutativity_residual(const DiscretizationMap& map, const SodeDef& G,
                                   const std::vector<TangentPoint>& samples) {
  const int n = map.dim();
  check_dims(n, G.dim, "sode_commutativity_residual");
  double worst = 0.0;
  for (const auto& s : samples) {
    Vector z = stack<double>(s.q, s.v);
    Vector field = stack<double>(s.v, Vector(G.gamma(z)));
    Vector x = map.eval<double>(z);
    Vector dx = map.jacobian_at<double>(z) * field;
    Vector a = map.eval<double>(stack<double>(Vector(x.head(n)), Vector(dx.head(n)))).tail(n);
    Vector b = map.eval<double>(stack<double>(Vector(x.tail(n)), Vector(dx.tail(n)))).head(n);
    worst = std::max(worst, (a - b).lpNorm<1>());
  }
  return worst;
}

Trajectory integrate(const StepFn& step, const Vector& x0, double h, int steps,
                     const std::function<double(const Vector&)>& energy) {
  if (steps < 0) throw RejectedInput("integrate: negative step count");
  Trajectory t;
  t.h = h;
  t.states.reserve(steps + 1);
  t.states.push_back(x0);
  if (energy) t.energy.push_back(energy(x0));
  for (int k = 0; k < steps; ++k) {
    long before = newton_iteration_counter();
    t.states.push_back(step(t.states.back(), h));
    t.newton_iters.push_back(newton_iteration_counter() - before);
    if (energy) t.energy.push_back(energy(t.states.back()));
  }
  return t;
}

Matrix canonical_J(int n) {
  Matrix J = Matrix::Zero(2 * n, 2 * n);
  J.topRightCorner(n, n) = Matrix::Identity(n, n);
  J.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  return J;
}

double symplectic_defect(const StepFn& step, const Vector& x, double h, double fd) {
  const Eigen::Index m = x.size();
  if (m % 2) throw RejectedInput("symplectic_defect: state length must be even");
  Matrix M(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    Vector xp = x, xm = x;
    xp[j] += fd;
    xm[j] -= fd;
    M.col(j) = (step(xp, h) - step(xm, h)) / (2 * fd);
  }
  Matrix J = canonical_J(static_cast<int>(m / 2));
  Matrix D = M.transpose() * J * M - J;
  return D.cwiseAbs().rowwise().sum().maxCoeff();
}

StepFn hamiltonian_stepper(const DiscretizationMap& map, const HamiltonianDef& H, const NewtonConfig& cfg) {
  const int n = map.dim();
  return [map, H, cfg, n](const Vector& x, double h) {
    CotangentPoint next = hamiltonian_step(map, H, x.head(n), x.tail(n), h, cfg);
    return stack<double>(next.q, next.p);
  };
}

}  // namespace geomint
