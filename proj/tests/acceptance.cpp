#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "geomint/harness.hpp"

using namespace geomint;
using ad::scalar_t;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

Vector vec(std::initializer_list<double> xs) {
  Vector v(xs.size());
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Vector cat(std::initializer_list<Vector> parts) {
  Eigen::Index total = 0;
  for (const auto& p : parts) total += p.size();
  Vector out(total);
  Eigen::Index k = 0;
  for (const auto& p : parts) {
    out.segment(k, p.size()) = p;
    k += p.size();
  }
  return out;
}

Vector rand_vec(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

double inf(const Vector& v) { return v.lpNorm<Eigen::Infinity>(); }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

HamiltonianDef harmonic() {
  return {1, [](const auto& z) { return (z[0] * z[0] + z[1] * z[1]) * 0.5; }};
}

HamiltonianDef pendulum() {
  return {1, [](const auto& z) { return z[1] * z[1] * 0.5 + 1.0 - ad::cos(z[0]); }};
}

HamiltonianDef kepler() {
  return {2, [](const auto& z) {
            using S = scalar_t<decltype(z)>;
            Vec<S> q = z.head(2), p = z.tail(2);
            return S(0.5 * p.dot(p) - 1.0 / ad::sqrt(q.dot(q)));
          }};
}

HamiltonianDef cubic() {
  return {1, [](const auto& z) { return z[1] * z[1] * 0.5 + z[0] * z[0] * 0.5 + z[0] * z[0] * z[0] / 3.0; }};
}

// Nonlinear map without a closed-form inverse.
DiscretizationMap warped_map(int n) {
  MapDef def;
  def.name = "warped";
  def.dim = n;
  def.pair = [n](const auto& z) {
    using S = scalar_t<decltype(z)>;
    Vec<S> x(2 * n);
    for (int i = 0; i < n; ++i) {
      x[i] = z[i] - 0.4 * z[n + i] + 0.1 * ad::sin(z[i]) * z[n + i] * z[n + i];
      x[n + i] = z[i] + 0.6 * z[n + i] + 0.05 * z[n + i] * z[n + i] * z[(i + 1) % n];
    }
    return x;
  };
  return DiscretizationMap(def);
}

// 1 ---------------------------------------------------------------------------------------

Outcome map_validity() {
  const int n = 2, count = 100;
  std::vector<std::pair<DiscretizationMap, int>> maps;  // map and sample dimension
  auto flat = [&](const DiscretizationMap& m) { maps.push_back({m, m.dim()}); };
  flat(midpoint_map(n));
  flat(explicit_euler_map(n));
  flat(symplectic_euler_map(n));
  flat(theta_map(n, 0.3));
  for (double th : {0.0, 0.3, 0.5, 1.0}) flat(from_retraction(euclidean_retraction(n), th));
  for (const auto& m : {explicit_euler_map(n), theta_map(n, 0.3), midpoint_map(n)}) flat(adjoint(m));
  for (const auto& m : {midpoint_map(n), explicit_euler_map(n), theta_map(n, 0.3), warped_map(n)}) {
    flat(tangent_lift(m));
    flat(cotangent_lift(m));
  }
  for (auto [g, b] : {std::pair{0.5, 0.25}, std::pair{0.6, 0.3}, std::pair{0.5, 0.0}}) flat(newmark_map(g, b, 0.1, n));

  Outcome o;
  double worst = 0.0;
  int checked = 0;
  auto record = [&](const std::string& name, const ValidityReport& r) {
    ++checked;
    double w = std::max({r.identity_residual, r.derivative_residual, r.inverse_residual, r.jacobian_residual});
    worst = std::max(worst, w);
    if (!r.passed || w >= 1e-9) {
      o.pass = false;
      o.detail += name + " residual " + sci(w) + "; ";
    }
  };
  for (const auto& [m, dim] : maps) record(m.name(), validate(m, random_samples(dim, count, 100 + checked, 0.5)));
  for (const auto& m : {sphere_projection_map(), sphere_one_sided_map(), sphere_exp_map()})
    record(m.name(), validate_constrained(m, sphere_samples(count, 200 + checked, 0.8), sphere_tangent_basis));
  auto so3 = random_samples(3, count, 300, 0.8);
  for (auto& s : so3) s.q *= 0.5;
  record("so3-cayley", validate(so3_cayley_map(), so3));
  o.detail += std::to_string(checked) + " maps, worst residual " + sci(worst);
  return o;
}

// 2 ---------------------------------------------------------------------------------------

Outcome closed_forms() {
  const int n = 2;
  auto R = midpoint_map(n);
  auto T = tangent_lift(R);
  auto C = cotangent_lift(R);
  std::mt19937_64 rng(2);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    Vector q0 = rand_vec(rng, n), q1 = rand_vec(rng, n);
    auto r = invert(R, q0, q1);
    worst = std::max({worst, inf(r.q - (q0 + q1) / 2), inf(r.v - (q1 - q0))});

    Vector q = rand_vec(rng, n), qd = rand_vec(rng, n), v = rand_vec(rng, n), vd = rand_vec(rng, n);
    auto t = eval_pair(T, {cat({q, qd}), cat({v, vd})});
    worst = std::max({worst, inf(t.x0 - cat({q - v / 2, qd - vd / 2})), inf(t.x1 - cat({q + v / 2, qd + vd / 2}))});

    Vector v0 = rand_vec(rng, n), v1 = rand_vec(rng, n);
    auto ti = invert(T, cat({q0, v0}), cat({q1, v1}));
    worst = std::max({worst, inf(ti.q - cat({(q0 + q1) / 2, (v0 + v1) / 2})), inf(ti.v - cat({q1 - q0, v1 - v0}))});

    Vector p = rand_vec(rng, n), pd = rand_vec(rng, n);
    auto c = eval_pair(C, {cat({q, p}), cat({qd, pd})});
    worst = std::max({worst, inf(c.x0 - cat({q - qd / 2, p - pd / 2})), inf(c.x1 - cat({q + qd / 2, p + pd / 2}))});

    Vector p0 = rand_vec(rng, n), p1 = rand_vec(rng, n);
    auto ci = invert(C, cat({q0, p0}), cat({q1, p1}));
    worst = std::max({worst, inf(ci.q - cat({(q0 + q1) / 2, (p0 + p1) / 2})), inf(ci.v - cat({q1 - q0, p1 - p0}))});
  }
  return {worst <= 1e-14, "worst deviation " + sci(worst) + " over 100 random inputs"};
}

// 3 ---------------------------------------------------------------------------------------

Outcome symplecticity() {
  struct Sys {
    std::string name;
    HamiltonianDef H;
    Vector x;
  };
  std::vector<Sys> systems = {{"harmonic", harmonic(), vec({0.7, 0.4})},
                              {"pendulum", pendulum(), vec({1.0, 0.3})},
                              {"kepler-2d", kepler(), vec({0.5, 0.1, -0.2, 1.6})}};
  const double h = 0.1;
  Outcome o;
  double worst = 0.0;
  for (const auto& s : systems) {
    int n = s.H.dim;
    std::vector<std::pair<std::string, StepFn>> methods = {
        {"midpoint", hamiltonian_stepper(midpoint_map(n), s.H)},
        {"symplectic-euler", hamiltonian_stepper(symplectic_euler_map(n), s.H)},
        {"stormer-verlet", stormer_verlet(s.H).step},
        {"triple-jump", triple_jump(stormer_verlet(s.H)).step}};
    for (const auto& [name, step] : methods) {
      double d = symplectic_defect(step, s.x, h);
      worst = std::max(worst, d);
      if (!(d < 1e-7)) {
        o.pass = false;
        o.detail += name + "/" + s.name + " " + sci(d) + "; ";
      }
    }
  }
  auto mid = midpoint_map(1);
  auto H = cubic();
  StepFn endpoint = [mid, H](const Vector& x, double hh) {
    auto r = hamiltonian_step_endpoint_nonsymplectic(mid, H, x.head(1), x.tail(1), hh);
    return stack<double>(r.q, r.p);
  };
  double control = symplectic_defect(endpoint, vec({0.0, 0.5}), h);
  if (!(control > 1e-4)) o.pass = false;
  o.detail += "worst symplectic defect " + sci(worst) + ", endpoint control " + sci(control);
  return o;
}

// 4 ---------------------------------------------------------------------------------------

Outcome observed_orders() {
  auto suite = harness::run_suite(GEOMINT_SOURCE_DIR "/configs/acceptance");
  struct Want {
    std::string name;
    double order, tol;
  };
  std::vector<Want> wants = {{"sympl-euler", 1.0, 0.1},
                             {"midpoint", 2.0, 0.1},
                             {"stormer-verlet", 2.0, 0.1},
                             {"triple-jump", 4.0, 0.2},
                             {"double-triple-jump", 6.0, 0.4}};
  Outcome o;
  for (const auto& w : wants) {
    auto it = std::find_if(suite.entries.begin(), suite.entries.end(), [&](const auto& e) { return e.name == w.name; });
    if (it == suite.entries.end()) {
      o.pass = false;
      o.detail += w.name + " missing; ";
      continue;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s %.3f", w.name.c_str(), it->order);
    o.detail += buf;
    o.detail += "; ";
    if (it->exit_code != 0 || !(std::abs(it->order - w.order) <= w.tol)) o.pass = false;
  }
  return o;
}

// 5 ---------------------------------------------------------------------------------------

Vector leapfrog(const std::function<Vector(const Vector&)>& force, const Vector& x, double h) {
  int n = static_cast<int>(x.size()) / 2;
  Vector q = x.head(n), p = x.tail(n);
  Vector ph = p + h / 2 * force(q);
  Vector q1 = q + h * ph;
  Vector p1 = ph + h / 2 * force(q1);
  return cat({q1, p1});
}

Outcome equivalences() {
  const double h = 0.1;
  const int steps = 100;
  double a = 0, b = 0, c = 0, d = 0, e = 0;

  // (a) textbook Newmark on a linear spring, a = -4 q
  SodeDef spring{1, [](const auto& z) { return Vec<scalar_t<decltype(z)>>(-4.0 * z.head(1)); }};
  for (auto [gamma, beta] : {std::pair{0.5, 0.25}, std::pair{0.6, 0.3}, std::pair{0.5, 0.0}}) {
    auto N = newmark_map(gamma, beta, h, 1);
    double q = 1.0, v = 0.2, acc = -4.0 * q;
    Vector qs = vec({q}), vs = vec({v});
    for (int k = 0; k < steps; ++k) {
      double a1 = -4.0 * (q + h * v + h * h / 2 * (1 - 2 * beta) * acc) / (1 + 4.0 * beta * h * h);
      double q1 = q + h * v + h * h / 2 * ((1 - 2 * beta) * acc + 2 * beta * a1);
      double v1 = v + h * ((1 - gamma) * acc + gamma * a1);
      auto z = sode_step_endpoint(N, spring, qs, vs, h);
      a = std::max({a, std::abs(z.q[0] - q1), std::abs(z.v[0] - v1)});
      q = q1, v = v1, acc = a1;
      qs = z.q, vs = z.v;
    }
  }

  // (b) trapezoidal Newmark map against the tangent-lifted midpoint map
  SodeDef pend{1, [](const auto& z) {
                 using S = scalar_t<decltype(z)>;
                 Vec<S> f(1);
                 f[0] = -ad::sin(z[0]);
                 return f;
               }};
  {
    auto N = newmark_map(0.5, 0.25, h, 1);
    auto T = tangent_lift(midpoint_map(1));
    for (const auto& s : random_samples(2, 100, 55, 0.5))
      b = std::max(b, inf(N.eval<double>(stack<double>(s.q, s.v)) - T.eval<double>(stack<double>(s.q, s.v))));
    TangentPoint x{vec({1.0}), vec({0.0})}, y = x;
    for (int k = 0; k < steps; ++k) {
      x = sode_step_endpoint(N, pend, x.q, x.v, h);
      y = sode_step_endpoint(T, pend, y.q, y.v, h);
      b = std::max({b, inf(x.q - y.q), inf(x.v - y.v)});
    }
  }

  // (c) variational midpoint against Hamiltonian midpoint
  {
    LagrangianDef L{1, [](const auto& z) { return z[1] * z[1] * 0.5 - 1.0 + ad::cos(z[0]); }, {}, {}, {}};
    auto m = midpoint_map(1);
    Vector q = vec({1.0}), p = vec({0.0}), qh = q, ph = p, q_prev = q;
    for (int k = 0; k < steps; ++k) {
      auto v = momentum_match(m, L, q, p, h);
      auto w = hamiltonian_step(m, pendulum(), qh, ph, h);
      c = std::max({c, inf(v.q - w.q), inf(v.p - w.p)});
      if (k > 0) c = std::max(c, inf(variational_step(m, L, q_prev, q, h) - v.q));
      q_prev = q;
      q = v.q, p = v.p, qh = w.q, ph = w.p;
    }
  }

  // (d) Lagrangian lift against the tangent lift, mechanical L with a mass matrix
  {
    static const Matrix M = (Matrix(2, 2) << 2.0, 0.5, 0.5, 1.0).finished();
    LagrangianDef L;
    L.dim = 2;
    L.l_of = [](const auto& z) {
      using S = scalar_t<decltype(z)>;
      Vec<S> q = z.head(2), v = z.tail(2);
      return S(0.5 * v.dot(Vec<S>(M * v)) - (1.0 - ad::cos(q[0])) - 0.5 * q[1] * q[1] - 0.1 * q[0] * q[1] * q[1]);
    };
    SodeDef G{2, [](const auto& z) {
                using S = scalar_t<decltype(z)>;
                Vec<S> f(2);
                f << -ad::sin(z[0]) - 0.1 * z[1] * z[1], -z[1] - 0.2 * z[0] * z[1];
                return Vec<S>(M.inverse() * f);
              }};
    auto RL = lagrangian_lift(midpoint_map(2), L);
    auto T = tangent_lift(midpoint_map(2));
    for (const auto& s : random_samples(4, 100, 66, 0.5))
      d = std::max(d, inf(RL.eval<double>(stack<double>(s.q, s.v)) - T.eval<double>(stack<double>(s.q, s.v))));
    TangentPoint x{vec({0.4, -0.3}), vec({0.2, 0.5})}, y = x;
    for (int k = 0; k < steps; ++k) {
      x = sode_step_midbase(RL, G, x.q, x.v, h);
      y = sode_step_midbase(T, G, y.q, y.v, h);
      d = std::max({d, inf(x.q - y.q), inf(x.v - y.v)});
    }
  }

  // (e) Stormer-Verlet against a hand-written leapfrog
  {
    auto pf = [](const Vector& q) { return Vector(-q.array().sin().matrix()); };
    auto kf = [](const Vector& q) { return Vector(-q / std::pow(q.squaredNorm(), 1.5)); };
    std::vector<std::tuple<HamiltonianDef, std::function<Vector(const Vector&)>, Vector>> cases = {
        {pendulum(), pf, vec({1.0, 0.0})}, {kepler(), kf, vec({0.5, 0.0, 0.0, std::sqrt(3.0)})}};
    for (const auto& [H, f, x0] : cases) {
      auto sv = stormer_verlet(H);
      Vector x = x0, y = x0;
      double hh = H.dim == 2 ? 0.01 : h;
      for (int k = 0; k < steps; ++k) {
        x = sv.step(x, hh);
        y = leapfrog(f, y, hh);
        e = std::max(e, inf(x - y));
      }
    }
  }

  bool ok = a <= 1e-10 && b <= 1e-10 && c <= 1e-10 && d <= 1e-10 && e <= 1e-10;
  return {ok, "newmark " + sci(a) + ", newmark/lifted midpoint " + sci(b) + ", variational/hamiltonian " + sci(c) +
                  ", lagrangian lift/tangent lift " + sci(d) + ", stormer-verlet/leapfrog " + sci(e)};
}

// 6 ---------------------------------------------------------------------------------------

Outcome structural() {
  const int n = 2;
  auto samples = random_samples(n, 100, 61, 0.5);
  auto lifted_samples = random_samples(2 * n, 100, 62, 0.5);
  std::vector<DiscretizationMap> maps = {midpoint_map(n), theta_map(n, 0.3), explicit_euler_map(n), warped_map(n)};
  double inv = 0, comm = 0, pair = 0;

  for (const auto& m : maps) {
    auto aa = adjoint(adjoint(m));
    for (const auto& s : samples) {
      Vector z = stack<double>(s.q, s.v);
      inv = std::max(inv, inf(aa.eval<double>(z) - m.eval<double>(z)));
    }
    auto t1 = tangent_lift(adjoint(m)), t2 = adjoint(tangent_lift(m));
    auto c1 = cotangent_lift(adjoint(m)), c2 = adjoint(cotangent_lift(m));
    for (const auto& s : lifted_samples) {
      Vector z = stack<double>(s.q, s.v);
      comm = std::max({comm, inf(t1.eval<double>(z) - t2.eval<double>(z)), inf(c1.eval<double>(z) - c2.eval<double>(z))});
    }
  }

  // <Phi(a0, a1), R^T(w)> = <(R^T*)^-1(a0, a1), kappa(w)>
  std::mt19937_64 rng(63);
  for (const auto& m : maps) {
    auto T = tangent_lift(m);
    auto C = cotangent_lift(m);
    for (int k = 0; k < 100; ++k) {
      Vector q = rand_vec(rng, n), vel = rand_vec(rng, n, 0.5);
      auto pr = eval_pair(m, {q, vel});
      CotangentPoint a0{pr.x0, rand_vec(rng, n)}, a1{pr.x1, rand_vec(rng, n)};
      auto iv = invert(C, stack<double>(a0.q, a0.p), stack<double>(a1.q, a1.p));
      PhaseTangent V{iv.q.head(n), iv.q.tail(n), iv.v.head(n), iv.v.tail(n)};
      DoubleTangent w{V.q, rand_vec(rng, n), V.qdot, rand_vec(rng, n)};
      auto lifted = eval_pair(T, {stack<double>(w.q, w.v), stack<double>(w.qdot, w.vdot)});
      double lhs = pairing_pair(phi(a0, a1), lifted.x0.head(n), lifted.x0.tail(n), lifted.x1.head(n),
                                lifted.x1.tail(n), 1e-10);
      double rhs = pairing_T(V, kappa(w), 1e-10);
      pair = std::max(pair, std::abs(lhs - rhs));
    }
  }

  double sym_mid = pointwise_symmetry_condition(midpoint_map(n), samples);
  double sym_theta = pointwise_symmetry_condition(theta_map(n, 0.5), samples);
  double sym_euler = pointwise_symmetry_condition(explicit_euler_map(n), samples);

  SodeDef G{2, [](const auto& z) {
              using S = scalar_t<decltype(z)>;
              Vec<S> f(2);
              f << -ad::sin(z[0]) - 0.1 * z[1] * z[1], -z[1] - 0.2 * z[0] * z[1];
              return f;
            }};
  double sode_theta = 0;
  for (double th : {0.0, 0.3, 0.5, 1.0}) sode_theta = std::max(sode_theta, sode_commutativity_residual(theta_map(2, th), G, samples));
  MapDef def;
  def.name = "quadratic";
  def.dim = 1;
  def.pair = [](const auto& z) {
    using S = scalar_t<decltype(z)>;
    Vec<S> x(2);
    x << z[0] - 0.5 * z[1], z[0] + 0.5 * z[1] + 0.1 * z[1] * z[1];
    return x;
  };
  SodeDef osc{1, [](const auto& z) { return Vec<scalar_t<decltype(z)>>(-z.head(1)); }};
  double sode_counter = sode_commutativity_residual(DiscretizationMap(def), osc, random_samples(1, 100, 64));

  bool ok = inv <= 1e-10 && comm <= 1e-10 && pair <= 1e-10 && sym_mid <= 1e-10 && sym_theta <= 1e-10 &&
            sym_euler > 1e-10 && sode_theta < 1e-12 && sode_counter > 1e-10;
  return {ok, "involution " + sci(inv) + ", lift/adjoint " + sci(comm) + ", pairing " + sci(pair) + ", symmetry " +
                  sci(std::max(sym_mid, sym_theta)) + " vs explicit Euler " + sci(sym_euler) + ", sode theta " +
                  sci(sode_theta) + " vs counterexample " + sci(sode_counter)};
}

// 7 ---------------------------------------------------------------------------------------

Outcome manifold_runs() {
  HamiltonianDef free{3, [](const auto& z) {
                        using S = scalar_t<decltype(z)>;
                        Vec<S> p = z.tail(3);
                        return S(0.5 * p.dot(p));
                      }};
  SphereCotangent s{vec({1, 0, 0}), vec({0, 0.6, 0.8})};
  Eigen::Vector3d normal = Eigen::Vector3d(s.x).cross(Eigen::Vector3d(s.p)).normalized();
  double circle = 0.0;
  for (int k = 0; k < 100; ++k) {
    s = sphere_hamiltonian_step(free, s, 0.05);
    double off_plane = normal.dot(Eigen::Vector3d(s.x)), off_radius = s.x.norm() - 1.0;
    circle = std::max(circle, std::hypot(off_plane, off_radius));
  }

  Eigen::Vector3d inertia(1, 2, 3);
  auto H = rigid_body_hamiltonian(inertia);
  auto chart_step = hamiltonian_stepper(so3_cayley_map(INFINITY), H);
  RigidBodyState r = rigid_body_from_body(Eigen::Matrix3d::Identity(), Eigen::Vector3d(0.3, 0.5, -0.4));
  auto energy = [&](const RigidBodyState& x) {
    Eigen::Vector3d pi = body_momentum(x);
    return 0.5 * (pi.array().square() / inertia.array()).sum();
  };
  double e0 = energy(r), drift = 0.0, defect = 0.0;
  for (int k = 0; k < 1000; ++k) {
    if (k % 100 == 0) defect = std::max(defect, symplectic_defect(chart_step, cat({r.a, r.p}), 0.1));
    r = rigid_body_step(H, r, 0.1);
    drift = std::max(drift, std::abs(energy(r) - e0));
  }
  bool ok = circle < 1e-8 && defect < 1e-7 && drift < 1e-4;
  return {ok, "great-circle distance " + sci(circle) + ", rigid body defect " + sci(defect) + ", energy drift " +
                  sci(drift)};
}

// 8 ---------------------------------------------------------------------------------------

Outcome energy_behaviour() {
  auto H = pendulum();
  auto step = hamiltonian_stepper(midpoint_map(1), H);
  Vector x = vec({1.0, 0.0});
  double e0 = H.h_of(x), worst = 0.0, first_half = 0.0;
  for (int k = 0; k < 10000; ++k) {
    x = step(x, 0.1);
    worst = std::max(worst, std::abs(H.h_of(x) - e0));
    if (k == 4999) first_half = worst;
  }
  return {worst < 1e-3, "max |dH| " + sci(worst) + " (first half " + sci(first_half) + ")"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double limit;  // seconds, 0 for none
    std::function<Outcome()> run;
  };
  std::vector<Criterion> all = {{1, "map validity", 5.0, map_validity},
                                {2, "midpoint closed forms", 0.0, closed_forms},
                                {3, "symplecticity", 30.0, symplecticity},
                                {4, "observed orders", 60.0, observed_orders},
                                {5, "scheme equivalences", 0.0, equivalences},
                                {6, "structural identities", 0.0, structural},
                                {7, "manifold runs", 0.0, manifold_runs},
                                {8, "energy behaviour", 0.0, energy_behaviour}};
  int failed = 0;
  for (const auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit > 0 && secs > c.limit) {
      o.pass = false;
      o.detail += "; over time limit";
    }
    if (!o.pass) ++failed;
    std::printf("criterion %d %-22s %s  %s (%.2f s)\n", c.id, c.title, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
