#include "geomint/composition.hpp"

#include <cmath>
#include <sstream>

namespace geomint {

using ad::scalar_t;

StepperDef hamiltonian_method(const DiscretizationMap& map, const HamiltonianDef& H, const NewtonConfig& cfg) {
  StepperDef s;
  s.step = hamiltonian_stepper(map, H, cfg);
  s.symmetric = pointwise_symmetry_condition(map, random_samples(map.dim(), 20, 12345, 0.5)) < 1e-10;
  s.order = s.symmetric ? 2 : 1;
  s.label = map.name();
  return s;
}

StepperDef adjoint_method(const StepperDef& s, const NewtonConfig& cfg) {
  StepperDef out;
  out.order = s.order;
  out.symmetric = s.symmetric;
  out.label = "adjoint(" + s.label + ")";
  StepFn step = s.step;
  out.step = [step, cfg](const Vector& x, double h) {
    auto F = [&](const Vector& y) -> Vector { return step(y, -h) - x; };
    try {
      return newton_solve_fd(F, step(x, h), cfg).x;
    } catch (const ConvergenceFailure& e) {
      throw NoInverse(std::string("adjoint_method: ") + e.what(), e.residual());
    }
  };
  return out;
}

StepperDef compose(const std::vector<StepperDef>& steppers, const std::vector<double>& gammas) {
  if (steppers.size() != gammas.size()) throw RejectedInput("compose: list lengths differ");
  if (steppers.empty()) throw RejectedInput("compose: empty composition");
  StepperDef out;
  std::ostringstream os;
  os << "compose[";
  for (size_t i = 0; i < steppers.size(); ++i) os << (i ? "," : "") << steppers[i].label << "@" << gammas[i];
  os << "]";
  out.label = os.str();
  out.order = steppers.front().order;
  for (const auto& s : steppers) out.order = std::min(out.order, s.order);
  std::vector<StepFn> steps;
  for (const auto& s : steppers) steps.push_back(s.step);
  out.step = [steps, gammas](const Vector& x, double h) {
    Vector y = x;
    for (size_t i = 0; i < steps.size(); ++i) y = steps[i](y, gammas[i] * h);
    return y;
  };
  return out;
}

StepperDef stormer_verlet(const HamiltonianDef& H, const NewtonConfig& cfg) {
  const int n = H.dim;
  auto hf = H.h_of;
  StepperDef out;
  out.order = 2;
  out.symmetric = true;
  out.label = "stormer-verlet";
  out.step = [hf, n, cfg](const Vector& x, double h) {
    check_length(x, 2 * n, "stormer_verlet state");
    Vector qk = x.head(n), pk = x.tail(n);
    auto grad = [hf, n]<class S>(const Vec<S>& q, const Vec<S>& p) {
      return ad::gradient<S>(hf, stack<S>(q, p));
    };
    // p_{k+1/2} = p_k - h/2 dH/dq(q_k, p_{k+1/2})
    ad::VectorFn F1 = [grad, qk, pk, h, n](const auto& ph) {
      using S = scalar_t<decltype(ph)>;
      if constexpr (!ad::has_headroom_v<S>) {
        throw DerivativeOrderError();
        return Vec<S>();
      } else {
        Vec<S> g = grad(ad::lift_to<S>(qk), Vec<S>(ph));
        return Vec<S>(ph - ad::lift_to<S>(pk) + 0.5 * h * g.head(n));
      }
    };
    Vector ph = newton_solve(F1, pk, cfg).x;
    // q_{k+1} = q_k + h/2 (dH/dp(q_k, p_{k+1/2}) + dH/dp(q_{k+1}, p_{k+1/2}))
    Vector gk = ad::gradient<double>(hf, stack<double>(qk, ph)).tail(n);
    ad::VectorFn F2 = [grad, qk, ph, gk, h, n](const auto& q1) {
      using S = scalar_t<decltype(q1)>;
      if constexpr (!ad::has_headroom_v<S>) {
        throw DerivativeOrderError();
        return Vec<S>();
      } else {
        Vec<S> g = grad(Vec<S>(q1), ad::lift_to<S>(ph));
        return Vec<S>(q1 - ad::lift_to<S>(qk) - 0.5 * h * (ad::lift_to<S>(gk) + Vec<S>(g.tail(n))));
      }
    };
    Vector q1 = newton_solve(F2, Vector(qk + h * gk), cfg).x;
    // p_{k+1} = p_{k+1/2} - h/2 dH/dq(q_{k+1}, p_{k+1/2})
    Vector p1 = ph - 0.5 * h * ad::gradient<double>(hf, stack<double>(q1, ph)).head(n);
    return stack<double>(q1, p1);
  };
  return out;
}

StepperDef stormer_verlet_composed(const HamiltonianDef& H, const NewtonConfig& cfg) {
  const int n = H.dim;
  StepperDef a = hamiltonian_method(explicit_euler_map(n), H, cfg);
  StepperDef b = hamiltonian_method(symplectic_euler_map(n), H, cfg);
  StepperDef out = compose({a, b}, {0.5, 0.5});
  out.order = 2;
  out.symmetric = true;
  out.label = "stormer-verlet(composed)";
  return out;
}

std::vector<double> triple_jump_coefficients(int base_order) {
  if (base_order < 2 || base_order % 2) throw RejectedInput("triple_jump: base order must be even and >= 2");
  double g = std::pow(2.0, 1.0 / (base_order + 1));
  double g1 = 1.0 / (2.0 - g);
  return {g1, -g * g1, g1};
}

StepperDef triple_jump(const StepperDef& s) {
  if (!s.symmetric) throw RejectedInput("triple_jump: base method must be symmetric");
  auto c = triple_jump_coefficients(s.order);
  StepperDef out = compose({s, s, s}, c);
  out.order = s.order + 2;
  out.symmetric = true;
  out.label = "triple-jump(" + s.label + ")";
  return out;
}

OrderConditions check_order_conditions(const std::vector<double>& gammas) {
  OrderConditions oc;
  for (double g : gammas) {
    oc.sum += g;
    oc.cube_sum += g * g * g;
  }
  oc.satisfied = std::abs(oc.sum - 1.0) < 1e-12 && std::abs(oc.cube_sum) < 1e-12;
  return oc;
}

double pointwise_symmetry_condition(const DiscretizationMap& map, const std::vector<TangentPoint>& samples) {
  return is_symmetric(map, samples).max_deviation;
}

}  // namespace geomint
