#include "geomint/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <random>
#include <sstream>

namespace geomint::harness {

using ad::scalar_t;

const char* const kCsvHeader = "h,global_error,energy_drift_max,symplectic_defect,newton_iters_mean,wall_time";

// Config parsing ------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& text) {
  std::string t = trim(text);
  if (t == "pi") return M_PI;
  try {
    std::size_t used = 0;
    double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects a number, got '" + t + "'");
  }
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::string t = text;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream is(t);
  std::vector<double> out;
  std::string item;
  while (is >> item) out.push_back(parse_number(key, item));
  return out;
}

bool parse_bool(const std::string& key, const std::string& text) {
  std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("config: key '" + key + "' expects true or false, got '" + t + "'");
}

}  // namespace

void check_config(const ExperimentConfig& cfg) {
  if (cfg.h_list.empty()) throw ConfigError("config: h_list is empty");
  for (std::size_t i = 0; i < cfg.h_list.size(); ++i) {
    if (!(cfg.h_list[i] > 0) || !std::isfinite(cfg.h_list[i])) throw ConfigError("config: h_list entries must be positive");
    if (i > 0 && !(cfg.h_list[i] < cfg.h_list[i - 1])) throw ConfigError("config: h_list must be strictly descending");
  }
  if (!(cfg.t_final > 0) || !std::isfinite(cfg.t_final)) throw ConfigError("config: t_final must be positive");
  for (double h : cfg.h_list) {
    double steps = cfg.t_final / h;
    if (std::abs(steps - std::round(steps)) > 1e-8 * std::max(1.0, steps))
      throw ConfigError("config: t_final is not a whole number of steps for h = " + std::to_string(h));
  }
  if (cfg.newton.tol <= 0 || cfg.newton.max_iter <= 0) throw ConfigError("config: tol and max_iter must be positive");
  if (cfg.inertia.size() != 3 || std::any_of(cfg.inertia.begin(), cfg.inertia.end(), [](double v) { return v <= 0; }))
    throw ConfigError("config: inertia needs three positive values");
}

ExperimentConfig parse_config(const std::string& text, const std::string& name) {
  ExperimentConfig cfg;
  cfg.name = name;
  std::istringstream is(text);
  std::string line;
  std::map<std::string, int> seen;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (seen[key]++) throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    if (key == "system") cfg.system = val;
    else if (key == "map") cfg.map = val;
    else if (key == "theta") cfg.theta = parse_number(key, val);
    else if (key == "gamma") cfg.gamma = parse_number(key, val);
    else if (key == "beta") cfg.beta = parse_number(key, val);
    else if (key == "scheme") cfg.scheme = val;
    else if (key == "base") cfg.base = val;
    else if (key == "gammas") cfg.gammas = parse_list(key, val);
    else if (key == "h_list") cfg.h_list = parse_list(key, val);
    else if (key == "t_final") cfg.t_final = parse_number(key, val);
    else if (key == "initial") {
      if (val == "random") cfg.random_initial = true;
      else cfg.initial = parse_list(key, val);
    } else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_number(key, val));
    else if (key == "inertia") cfg.inertia = parse_list(key, val);
    else if (key == "order_floor") cfg.order_floor = parse_number(key, val);
    else if (key == "output") cfg.output = val;
    else if (key == "name") cfg.name = val;
    else if (key == "tol") cfg.newton.tol = parse_number(key, val);
    else if (key == "max_iter") cfg.newton.max_iter = static_cast<int>(parse_number(key, val));
    else if (key == "jacobian_mode") {
      if (val == "ad") cfg.newton.jacobian_mode = JacobianMode::AD;
      else if (val == "fd") cfg.newton.jacobian_mode = JacobianMode::FD;
      else throw ConfigError("config: jacobian_mode must be ad or fd");
    } else if (key == "timing") cfg.timing = parse_bool(key, val);
    else throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.stem().string());
}

// Names -------------------------------------------------------------------------------------

std::vector<NamedItem> map_names() {
  return {{"midpoint", "(q - v/2, q + v/2)"},
          {"theta", "(q - theta v, q + (1 - theta) v), key theta"},
          {"explicit-euler", "(q, q + v)"},
          {"symplectic-euler", "(q - v, q)"},
          {"newmark", "Newmark map on TQ, keys gamma and beta (sode schemes)"},
          {"sphere-projection", "two-sided projection map on S^2"},
          {"sphere-one-sided", "(x, (x + xi)/|x + xi|) on S^2"},
          {"sphere-exp", "great-circle map on S^2"},
          {"so3-cayley", "Cayley chart map on SO(3)"},
          {"tangent-lift:<map>", "tangent lift of another map"},
          {"cotangent-lift:<map>", "cotangent lift of another map"},
          {"adjoint:<map>", "adjoint of another map"}};
}

std::vector<NamedItem> system_names() {
  return {{"harmonic", "H = (p^2 + q^2)/2, default (q, p) = (1, 0), closed-form reference"},
          {"pendulum", "H = p^2/2 + 1 - cos q, default (1, 0)"},
          {"kepler-2d", "H = |p|^2/2 - 1/|q|, default q = (0.5, 0), p = (0, sqrt 3)"},
          {"sphere-free", "H = |p|^2/2 on T*S^2, default x = (1,0,0), p = (0,0.6,0.8), geodesic reference"},
          {"rigid-body", "free rigid body, inertia diag(1,2,3), default body momentum (0.3,0.5,-0.4)"}};
}

std::vector<NamedItem> scheme_names() {
  return {{"hamiltonian", "cotangent-lifted map, symplectic"},
          {"endpoint-nonsymplectic", "lifted map with the field at both ends (control)"},
          {"variational", "discrete Lagrangian from the map, momentum matching"},
          {"sode-endpoint", "second-order equation, field at both ends of a map on TQ"},
          {"sode-midbase", "second-order equation, field at the base of the inverse"},
          {"ode", "first-order scheme of the map on the phase space"},
          {"stormer-verlet", "Stormer-Verlet"},
          {"triple-jump", "triple jump of the base method"},
          {"double-triple-jump", "triple jump applied twice"},
          {"composition", "base method with substeps gammas"}};
}

DiscretizationMap make_map(const std::string& name, int n, const ExperimentConfig& cfg, double h) {
  auto wrapped = [&](const std::string& prefix) { return name.substr(prefix.size()); };
  if (name.rfind("tangent-lift:", 0) == 0) return tangent_lift(make_map(wrapped("tangent-lift:"), n, cfg, h));
  if (name.rfind("cotangent-lift:", 0) == 0) return cotangent_lift(make_map(wrapped("cotangent-lift:"), n, cfg, h));
  if (name.rfind("adjoint:", 0) == 0) return adjoint(make_map(wrapped("adjoint:"), n, cfg, h));
  if (name == "midpoint") return midpoint_map(n);
  if (name == "theta") return theta_map(n, cfg.theta);
  if (name == "explicit-euler") return explicit_euler_map(n);
  if (name == "symplectic-euler") return symplectic_euler_map(n);
  if (name == "newmark") {
    if (n % 2) throw ConfigError("newmark map needs an even dimension (map on TQ)");
    return newmark_map(cfg.gamma, cfg.beta, h, n / 2);
  }
  if (name == "sphere-projection" || name == "sphere-one-sided" || name == "sphere-exp" || name == "so3-cayley") {
    if (n != 3) throw ConfigError(name + " is a map in dimension 3");
    if (name == "sphere-projection") return sphere_projection_map();
    if (name == "sphere-one-sided") return sphere_one_sided_map();
    if (name == "sphere-exp") return sphere_exp_map();
    return so3_cayley_map();
  }
  throw ConfigError("unknown map '" + name + "'");
}

ValidityReport validate_named_map(const std::string& name, int n, int count, std::uint64_t seed,
                                  const ExperimentConfig& cfg) {
  if (name == "sphere-projection" || name == "sphere-one-sided" || name == "sphere-exp")
    return validate_constrained(make_map(name, 3, cfg), sphere_samples(count, seed, 0.8), sphere_tangent_basis);
  if (name == "so3-cayley") {
    auto samples = random_samples(3, count, seed, 0.8);
    for (auto& s : samples) s.q *= 0.5;
    return validate(make_map(name, 3, cfg), samples);
  }
  DiscretizationMap m = make_map(name, n, cfg);
  return validate(m, random_samples(m.dim(), count, seed));
}

// Systems --------------------------------------------------------------------------------------

namespace {

using Observe = std::function<Vector(const Vector&)>;
using Energy = std::function<double(const Vector&)>;

struct FlatSystem {
  int n = 0;
  HamiltonianDef H;
  LagrangianDef L;  // dim 0 when not available
  SodeDef G;
  VectorFieldDef X;
  Vector x0;
  std::function<Vector(double)> exact;  // state (q; p) at time t, when known
};

template <class Pot, class Force>
FlatSystem mechanical(int n, Pot pot, Force force) {
  FlatSystem s;
  s.n = n;
  s.H = {n, [n, pot](const auto& z) {
           using S = scalar_t<decltype(z)>;
           Vec<S> q = z.head(n), p = z.tail(n);
           return S(0.5 * p.dot(p) + pot(q));
         }};
  s.L.dim = n;
  s.L.l_of = [n, pot](const auto& z) {
    using S = scalar_t<decltype(z)>;
    Vec<S> q = z.head(n), v = z.tail(n);
    return S(0.5 * v.dot(v) - pot(q));
  };
  s.L.legendre = [n](const auto& z) {
    using S = scalar_t<decltype(z)>;
    return Vec<S>(z.tail(n));
  };
  s.L.legendre_inv = s.L.legendre;
  s.G = {n, [n, force](const auto& z) {
           using S = scalar_t<decltype(z)>;
           return Vec<S>(force(Vec<S>(z.head(n))));
         }};
  s.X = {2 * n, [n, force](const auto& z) {
           using S = scalar_t<decltype(z)>;
           Vec<S> out(2 * n);
           out << z.tail(n), force(Vec<S>(z.head(n)));
           return out;
         }};
  return s;
}

FlatSystem flat_system(const std::string& name) {
  if (name == "harmonic") {
    auto s = mechanical(
        1, [](const auto& q) { return q.dot(q) * 0.5; }, [](const auto& q) { return decltype(q)(-q); });
    s.x0 = Vector::Zero(2);
    s.x0[0] = 1.0;
    return s;
  }
  if (name == "pendulum") {
    auto s = mechanical(
        1, [](const auto& q) { return 1.0 - ad::cos(q[0]); },
        [](const auto& q) {
          std::remove_cvref_t<decltype(q)> f(1);
          f[0] = -ad::sin(q[0]);
          return f;
        });
    s.x0 = Vector::Zero(2);
    s.x0[0] = 1.0;
    return s;
  }
  if (name == "kepler-2d") {
    auto s = mechanical(
        2, [](const auto& q) { return -1.0 / ad::sqrt(q.dot(q)); },
        [](const auto& q) {
          auto r2 = q.dot(q);
          auto r3 = r2 * ad::sqrt(r2);
          return std::remove_cvref_t<decltype(q)>(-q / r3);
        });
    s.x0 = Vector::Zero(4);
    s.x0 << 0.5, 0.0, 0.0, std::sqrt(3.0);
    return s;
  }
  throw ConfigError("unknown system '" + name + "'");
}

Vector harmonic_exact(const Vector& x0, double t) {
  Vector out(2);
  out << x0[0] * std::cos(t) + x0[1] * std::sin(t), -x0[0] * std::sin(t) + x0[1] * std::cos(t);
  return out;
}

Vector geodesic(const Vector& x0, double t) {
  Vector x = x0.head(3), p = x0.tail(3);
  double w = p.norm();
  Vector out(6);
  if (w == 0) {
    out << x, p;
    return out;
  }
  out << std::cos(w * t) * x + std::sin(w * t) * p / w, -w * std::sin(w * t) * x + std::cos(w * t) * p;
  return out;
}

double induced_inf_norm(const Matrix& M) { return M.cwiseAbs().rowwise().sum().maxCoeff(); }

// Defect of a step on T*S^2 measured on the 4-dimensional tangent space:
// the pullback of the restricted canonical form compared with the form itself.
double sphere_defect(const StepFn& step, const Vector& state, double h, double fd = 1e-6) {
  Vector x = state.head(3), p = state.tail(3);
  Matrix E = sphere_tangent_basis(x);
  auto chart = [&](const Vector& u) {
    Vector y = (x + E * u.head(2)).normalized();
    Vector q = p + E * u.tail(2);
    q -= q.dot(y) * y;
    Vector out(6);
    out << y, q;
    return out;
  };
  Matrix Din(6, 4), Dout(6, 4);
  for (int j = 0; j < 4; ++j) {
    Vector du = Vector::Zero(4);
    du[j] = fd;
    Vector a = chart(du), b = chart(-du);
    Din.col(j) = (a - b) / (2 * fd);
    Dout.col(j) = (step(a, h) - step(b, h)) / (2 * fd);
  }
  Matrix J = canonical_J(3);
  return induced_inf_norm(Dout.transpose() * J * Dout - Din.transpose() * J * Din);
}

struct Setup {
  Vector x0;
  StepFn step;
  Energy energy;
  Observe observe;                         // state -> comparison vector
  std::function<double(double)> defect;    // h -> symplectic defect of one step at x0
  std::function<Vector(double)> exact;     // observed vector at time t, if closed form
  StepFn reference_step;                   // used when exact is empty
  std::string reference_label;
};

StepperDef named_method(const std::string& name, const ExperimentConfig& cfg, const FlatSystem& sys) {
  if (name == "stormer-verlet") return stormer_verlet(sys.H, cfg.newton);
  if (name == "hamiltonian") return hamiltonian_method(make_map(cfg.map, sys.n, cfg), sys.H, cfg.newton);
  if (name == "triple-jump") return triple_jump(stormer_verlet(sys.H, cfg.newton));
  throw ConfigError("unknown base method '" + name + "'");
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

StepFn flat_step(const ExperimentConfig& cfg, const FlatSystem& sys) {
  const int n = sys.n;
  const NewtonConfig nc = cfg.newton;
  const std::string& s = cfg.scheme;
  auto split = [n](const Vector& x) { return std::pair<Vector, Vector>(x.head(n), x.tail(n)); };
  auto join = [](const Vector& a, const Vector& b) {
    Vector out(a.size() + b.size());
    out << a, b;
    return out;
  };
  bool flat_map_scheme = s == "hamiltonian" || s == "endpoint-nonsymplectic" || s == "variational";
  if (flat_map_scheme) require(cfg.map != "newmark", "the newmark map is a map on TQ; use an sode scheme");
  if (s == "hamiltonian") return hamiltonian_method(make_map(cfg.map, n, cfg), sys.H, nc).step;
  if (s == "endpoint-nonsymplectic") {
    auto m = make_map(cfg.map, n, cfg);
    auto H = sys.H;
    return [=](const Vector& x, double h) {
      auto [q, p] = split(x);
      CotangentPoint c = hamiltonian_step_endpoint_nonsymplectic(m, H, q, p, h, nc);
      return join(c.q, c.p);
    };
  }
  if (s == "variational") {
    require(sys.L.dim > 0, "scheme variational needs a Lagrangian system");
    auto m = make_map(cfg.map, n, cfg);
    auto L = sys.L;
    return [=](const Vector& x, double h) {
      auto [q, p] = split(x);
      CotangentPoint c = momentum_match(m, L, q, p, h, nc);
      return join(c.q, c.p);
    };
  }
  if (s == "sode-endpoint" || s == "sode-midbase") {
    require(sys.G.dim > 0, "sode schemes need a second-order system");
    bool endpoint = s == "sode-endpoint";
    auto cache = std::make_shared<std::map<double, DiscretizationMap>>();
    auto G = sys.G;
    ExperimentConfig c = cfg;
    auto base = cfg.map == "newmark" ? std::optional<DiscretizationMap>() : make_map(cfg.map, n, cfg);
    return [=](const Vector& x, double h) {
      auto it = cache->find(h);
      if (it == cache->end())
        it = cache->emplace(h, base ? tangent_lift(*base) : newmark_map(c.gamma, c.beta, h, n)).first;
      auto [q, v] = split(x);
      TangentPoint t = endpoint ? sode_step_endpoint(it->second, G, q, v, h, nc) : sode_step_midbase(it->second, G, q, v, h, nc);
      return join(t.q, t.v);
    };
  }
  if (s == "ode") {
    require(sys.X.dim > 0, "scheme ode needs a first-order field");
    auto m = make_map(cfg.map, 2 * n, cfg);
    auto X = sys.X;
    return [=](const Vector& x, double h) { return ode_step(m, X, x, h, nc); };
  }
  if (s == "stormer-verlet") return stormer_verlet(sys.H, nc).step;
  if (s == "triple-jump") return triple_jump(named_method(cfg.base, cfg, sys)).step;
  if (s == "double-triple-jump") return triple_jump(triple_jump(named_method(cfg.base, cfg, sys))).step;
  if (s == "composition") {
    require(!cfg.gammas.empty(), "scheme composition needs gammas");
    StepperDef b = named_method(cfg.base, cfg, sys);
    return compose(std::vector<StepperDef>(cfg.gammas.size(), b), cfg.gammas).step;
  }
  throw ConfigError("unknown scheme '" + s + "'");
}

Vector initial_or(const ExperimentConfig& cfg, const Vector& fallback, std::size_t size) {
  if (cfg.random_initial) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vector x(size);
    for (auto& v : x) v = u(rng);
    return x;
  }
  if (cfg.initial.empty()) return fallback;
  if (cfg.initial.size() != size)
    throw ConfigError("config: initial needs " + std::to_string(size) + " values for " + cfg.system);
  return Eigen::Map<const Vector>(cfg.initial.data(), static_cast<Eigen::Index>(size));
}

Energy energy_of(const HamiltonianDef& H) {
  return [f = H.h_of](const Vector& x) { return f(x); };
}

Setup flat_setup(const ExperimentConfig& cfg, double h_min) {
  FlatSystem sys = flat_system(cfg.system);
  Setup s;
  s.x0 = initial_or(cfg, sys.x0, 2 * sys.n);
  s.step = flat_step(cfg, sys);
  s.energy = energy_of(sys.H);
  s.observe = [](const Vector& x) { return x; };
  s.defect = [step = s.step, x0 = s.x0](double h) { return symplectic_defect(step, x0, h); };
  if (cfg.system == "harmonic") {
    s.exact = [x0 = s.x0](double t) { return harmonic_exact(x0, t); };
    s.reference_label = "closed form";
  } else {
    s.reference_step = triple_jump(stormer_verlet(sys.H, cfg.newton)).step;
    char buf[96];
    std::snprintf(buf, sizeof buf, "triple-jump(stormer-verlet) at h = %.6g", h_min / 64);
    s.reference_label = buf;
  }
  return s;
}

Setup sphere_setup(const ExperimentConfig& cfg) {
  Vector fallback(6);
  fallback << 1, 0, 0, 0, 0.6, 0.8;
  Vector x0;
  if (cfg.random_initial) {
    TangentPoint t = sphere_samples(1, cfg.seed, 1.0).front();
    x0.resize(6);
    x0 << t.q, t.v;
  } else {
    x0 = initial_or(cfg, fallback, 6);
  }
  if (std::abs(x0.head(3).norm() - 1.0) > 1e-10 || std::abs(x0.head(3).dot(x0.tail(3))) > 1e-10)
    throw ConfigError("config: sphere initial state needs |x| = 1 and x . p = 0");
  Setup s;
  s.exact = [x0](double t) { return geodesic(x0, t); };
  s.reference_label = "closed form";
  s.energy = [](const Vector& x) { return 0.5 * x.tail(3).squaredNorm(); };
  if (cfg.scheme == "hamiltonian" && cfg.map == "sphere-one-sided") {
    HamiltonianDef H{3, [](const auto& z) {
                       using S = scalar_t<decltype(z)>;
                       Vec<S> p = z.tail(3);
                       return S(0.5 * p.dot(p));
                     }};
    NewtonConfig nc = cfg.newton;
    s.x0 = x0;
    s.step = [H, nc](const Vector& x, double h) {
      SphereCotangent c = sphere_hamiltonian_step(H, {x.head(3), x.tail(3)}, h, true, nc);
      Vector out(6);
      out << c.x, c.p;
      return out;
    };
    s.observe = [](const Vector& x) { return x; };
    s.defect = [step = s.step, x0](double h) { return sphere_defect(step, x0, h); };
    return s;
  }
  if (cfg.map.rfind("sphere-", 0) == 0)
    throw ConfigError("sphere-free in ambient coordinates runs scheme hamiltonian with map sphere-one-sided");
  // spherical-coordinate chart with the flat machinery
  FlatSystem sys;
  sys.n = 2;
  sys.H = sphere_chart_free_hamiltonian();
  s.x0 = sphere_to_chart({x0.head(3), x0.tail(3)});
  s.step = flat_step(cfg, sys);
  s.energy = energy_of(sys.H);
  s.observe = [](const Vector& c) {
    SphereCotangent a = sphere_from_chart(c);
    Vector out(6);
    out << a.x, a.p;
    return out;
  };
  s.defect = [step = s.step, c0 = s.x0](double h) { return symplectic_defect(step, c0, h); };
  return s;
}

Vector pack_rigid(const RigidBodyState& r) {
  Vector out(15);
  out << Eigen::Map<const Vector>(r.anchor.data(), 9), r.a, r.p;
  return out;
}

RigidBodyState unpack_rigid(const Vector& x) {
  RigidBodyState r;
  r.anchor = Eigen::Map<const Eigen::Matrix3d>(x.data());
  r.a = x.segment(9, 3);
  r.p = x.tail(3);
  return r;
}

StepFn rigid_full_step(StepFn chart_step, double reanchor) {
  return [chart_step, reanchor](const Vector& x, double h) {
    RigidBodyState r = unpack_rigid(x);
    Vector z(6);
    z << r.a, r.p;
    Vector y = chart_step(z, h);
    r.a = y.head(3);
    r.p = y.tail(3);
    if (r.a.norm() > reanchor) r = rigid_body_from_body(attitude(r), body_momentum(r));
    return pack_rigid(r);
  };
}

Setup rigid_setup(const ExperimentConfig& cfg, double h_min) {
  Eigen::Vector3d inertia(cfg.inertia[0], cfg.inertia[1], cfg.inertia[2]);
  HamiltonianDef H = rigid_body_hamiltonian(inertia);
  Vector pi0 = initial_or(cfg, Eigen::Vector3d(0.3, 0.5, -0.4), 3);
  DiscretizationMap chart = so3_cayley_map(INFINITY);
  StepperDef base = hamiltonian_method(chart, H, cfg.newton);
  StepFn chart_step;
  if (cfg.scheme == "hamiltonian") {
    require(cfg.map == "so3-cayley", "rigid-body runs on the so3-cayley map");
    chart_step = base.step;
  } else if (cfg.scheme == "triple-jump") {
    chart_step = triple_jump(base).step;
  } else if (cfg.scheme == "double-triple-jump") {
    chart_step = triple_jump(triple_jump(base)).step;
  } else {
    throw ConfigError("rigid-body supports schemes hamiltonian, triple-jump and double-triple-jump");
  }
  Setup s;
  s.x0 = pack_rigid(rigid_body_from_body(Eigen::Matrix3d::Identity(), pi0));
  s.step = rigid_full_step(chart_step, 0.5);
  s.energy = [inertia](const Vector& x) {
    Eigen::Vector3d pi = body_momentum(unpack_rigid(x));
    return 0.5 * (pi.array().square() / inertia.array()).sum();
  };
  s.observe = [](const Vector& x) {
    RigidBodyState r = unpack_rigid(x);
    Eigen::Matrix3d R = attitude(r);
    Vector out(12);
    out << Eigen::Map<const Vector>(R.data(), 9), body_momentum(r);
    return out;
  };
  s.defect = [chart_step, pi0](double h) {
    Vector z(6);
    z << Vector::Zero(3), pi0;
    return symplectic_defect(chart_step, z, h);
  };
  s.reference_step = rigid_full_step(triple_jump(base).step, 0.5);
  char buf[96];
  std::snprintf(buf, sizeof buf, "triple-jump(so3-cayley) at h = %.6g", h_min / 64);
  s.reference_label = buf;
  return s;
}

Setup make_setup(const ExperimentConfig& cfg) {
  double h_min = cfg.h_list.back();
  if (cfg.system == "sphere-free") return sphere_setup(cfg);
  if (cfg.system == "rigid-body") return rigid_setup(cfg, h_min);
  return flat_setup(cfg, h_min);
}

int steps_for(double t, double h) { return static_cast<int>(std::lround(t / h)); }

}  // namespace

// Experiments -------------------------------------------------------------------------------

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.config = cfg;
  Setup setup;
  try {
    check_config(cfg);
    setup = make_setup(cfg);
  } catch (const RejectedInput& e) {
    rep.exit_code = kConfigError;
    rep.message = e.what();
    return rep;
  } catch (const Error& e) {
    rep.exit_code = kNumericalFailure;
    rep.message = e.what();
    return rep;
  }
  rep.reference = setup.reference_label;
  const double T = cfg.t_final;
  double h = 0.0;
  try {
    Vector ref_final;
    if (setup.exact) {
      ref_final = setup.exact(T);
    } else {
      double href = cfg.h_list.back() / 64;
      Vector x = setup.x0;
      for (int k = 0, n = steps_for(T, href); k < n; ++k) x = setup.reference_step(x, href);
      ref_final = setup.observe(x);
    }
    for (double hh : cfg.h_list) {
      h = hh;
      ReportRow row;
      row.h = h;
      int n = steps_for(T, h);
      auto t0 = std::chrono::steady_clock::now();
      long it0 = newton_iteration_counter();
      Vector x = setup.x0;
      double e0 = setup.energy(x), drift = 0.0;
      for (int k = 0; k < n; ++k) {
        x = setup.step(x, h);
        if (!x.allFinite()) throw NumericalFailure("non-finite state");
        drift = std::max(drift, std::abs(setup.energy(x) - e0));
      }
      row.newton_iters_mean = static_cast<double>(newton_iteration_counter() - it0) / n;
      if (cfg.timing) row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      row.global_error = (setup.observe(x) - ref_final).norm();
      row.energy_drift_max = drift;
      row.symplectic_defect = setup.defect(h);
      rep.rows.push_back(row);
    }
  } catch (const Error& e) {
    rep.exit_code = kNumericalFailure;
    rep.message = std::string(e.what()) + " (h = " + std::to_string(h) + ")";
    ReportRow bad;
    bad.h = h;
    bad.global_error = bad.energy_drift_max = bad.symplectic_defect = bad.newton_iters_mean = NAN;
    rep.rows.push_back(bad);
  }
  return rep;
}

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

std::string row_csv(const ReportRow& r) {
  return fmt(r.h) + "," + fmt(r.global_error) + "," + fmt(r.energy_drift_max) + "," + fmt(r.symplectic_defect) + "," +
         fmt(r.newton_iters_mean) + "," + fmt(r.wall_time);
}

}  // namespace

void write_csv(std::ostream& os, const ExperimentReport& report) {
  os << kCsvHeader << "\n";
  for (const auto& r : report.rows) os << row_csv(r) << "\n";
}

int run_and_write(const ExperimentConfig& cfg, ExperimentReport* out) {
  ExperimentReport rep = run_experiment(cfg);
  if (!cfg.output.empty() && rep.exit_code != kConfigError) {
    std::ofstream f(cfg.output);
    if (!f) {
      rep.exit_code = kConfigError;
      rep.message = "cannot write " + cfg.output;
    } else {
      write_csv(f, rep);
    }
  }
  int code = rep.exit_code;
  if (out) *out = std::move(rep);
  return code;
}

double observed_order(const std::vector<ReportRow>& rows, double floor) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows)
    if (std::isfinite(r.global_error) && r.global_error > floor) pts.emplace_back(std::log(r.h), std::log(r.global_error));
  if (pts.size() < 2) return NAN;
  double mx = 0, my = 0;
  for (auto [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= pts.size();
  my /= pts.size();
  double sxy = 0, sxx = 0;
  for (auto [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  return sxy / sxx;
}

SuiteResult run_suite(const std::filesystem::path& dir, const std::function<void(ExperimentConfig&)>& override) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ConfigError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".cfg") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  std::vector<std::future<SuiteEntry>> jobs;
  for (const auto& f : files) {
    jobs.push_back(std::async(std::launch::async, [f, override] {
      SuiteEntry entry;
      entry.name = f.stem().string();
      try {
        ExperimentConfig cfg = load_config(f);
        if (override) override(cfg);
        cfg.output.clear();
        entry.report = run_experiment(cfg);
      } catch (const RejectedInput& e) {
        entry.report.exit_code = kConfigError;
        entry.report.message = e.what();
      }
      entry.exit_code = entry.report.exit_code;
      entry.message = entry.report.message;
      entry.order = entry.exit_code == kOk ? observed_order(entry.report.rows, entry.report.config.order_floor) : NAN;
      return entry;
    }));
  }
  SuiteResult out;
  for (auto& j : jobs) {
    out.entries.push_back(j.get());
    out.exit_code = std::max(out.exit_code, out.entries.back().exit_code);
  }
  return out;
}

void write_suite_csv(std::ostream& os, const SuiteResult& suite) {
  os << "config,system,scheme," << kCsvHeader << "\n";
  for (const auto& e : suite.entries)
    for (const auto& r : e.report.rows)
      os << e.name << "," << e.report.config.system << "," << e.report.config.scheme << "," << row_csv(r) << "\n";
}

void write_order_table(std::ostream& os, const SuiteResult& suite) {
  os << "config,observed_order,exit_code,reference,message\n";
  for (const auto& e : suite.entries) {
    std::string msg = e.message;
    std::replace(msg.begin(), msg.end(), ',', ';');
    os << e.name << "," << fmt(e.order) << "," << e.exit_code << "," << e.report.reference << "," << msg << "\n";
  }
}

}  // namespace geomint::harness
