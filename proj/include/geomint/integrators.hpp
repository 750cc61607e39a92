#pragma once

#include <functional>
#include <vector>

#include "geomint/core.hpp"
#include "geomint/lifts.hpp"

namespace geomint {

struct VectorFieldDef {
  int dim = 0;
  ad::VectorFn x_of;  // q -> X(q)
};

struct SodeDef {
  int dim = 0;
  ad::VectorFn gamma;  // (q; v) -> Gamma(q, v)
};

struct HamiltonianDef {
  int dim = 0;
  ad::ScalarFn h_of;  // (q; p) -> H
};

struct LagrangianDef {
  int dim = 0;
  ad::ScalarFn l_of;          // (q; v) -> L
  ad::VectorFn legendre;      // optional (q; v) -> p
  ad::VectorFn legendre_inv;  // optional (q; p) -> v
  NewtonConfig newton;
};

// Hamiltonian vector field (dH/dp, -dH/dq) at the stacked state (q; p).
Vector hamiltonian_field(const HamiltonianDef& H, const Vector& qp);

// x_{k+1} from h X(z) = v with R1(z, v) = x_k and x_{k+1} = R2(z, v).
Vector ode_step(const DiscretizationMap& map, const VectorFieldDef& X, const Vector& xk, double h,
                const NewtonConfig& cfg = {});

// R^2(q_k, v_k; h v_k, h Gamma_k) = R^1(q_{k+1}, v_{k+1}; h v_{k+1}, h Gamma_{k+1})
// for a map on TQ.
TangentPoint sode_step_endpoint(const DiscretizationMap& map_tq, const SodeDef& G, const Vector& qk,
                                const Vector& vk, double h, const NewtonConfig& cfg = {});

// h Gamma_hat(base of R^-1(z_k, z_{k+1})) = fiber of R^-1(z_k, z_{k+1}).
TangentPoint sode_step_midbase(const DiscretizationMap& map_tq, const SodeDef& G, const Vector& qk,
                               const Vector& vk, double h, const NewtonConfig& cfg = {});

// Symplectic scheme from the cotangent lift of a base map.
CotangentPoint hamiltonian_step(const DiscretizationMap& map, const HamiltonianDef& H, const Vector& qk,
                                const Vector& pk, double h, const NewtonConfig& cfg = {});

// Endpoint matching of the lifted map with h X_H at both ends. Not symplectic.
CotangentPoint hamiltonian_step_endpoint_nonsymplectic(const DiscretizationMap& map,
                                                       const HamiltonianDef& H, const Vector& qk,
                                                       const Vector& pk, double h,
                                                       const NewtonConfig& cfg = {});

// Fiber derivative and its inverse, closed form when supplied.
Vector legendre(const LagrangianDef& L, const Vector& q, const Vector& v);
Vector legendre_inverse(const LagrangianDef& L, const Vector& q, const Vector& p);

// H(q, p) = p . v - L(q, v) with v the inverse Legendre transform.
HamiltonianDef legendre_hamiltonian(const LagrangianDef& L);

TangentPoint lagrangian_step(const DiscretizationMap& map, const LagrangianDef& L, const Vector& qk,
                             const Vector& vk, double h, const NewtonConfig& cfg = {});

// (FL^-1, FL^-1) o R^T* o TFL as a map on TQ: base (q, v), velocity (qdot, vdot).
DiscretizationMap lagrangian_lift(const DiscretizationMap& map, const LagrangianDef& L);

// L_d(q0, q1) = h L(q, v / h) with (q, v) = R^-1(q0, q1), on the stacked (q0; q1).
ad::ScalarFn discrete_lagrangian(const DiscretizationMap& map, const LagrangianDef& L, double h);

// Discrete Euler-Lagrange: D1 L_d(q_k, q_{k+1}) + D2 L_d(q_{k-1}, q_k) = 0.
Vector variational_step(const DiscretizationMap& map, const LagrangianDef& L, const Vector& q_prev,
                        const Vector& qk, double h, const NewtonConfig& cfg = {});

// p_k = -D1 L_d(q_k, q_{k+1}) solved for q_{k+1}, then p_{k+1} = D2 L_d(q_k, q_{k+1}).
CotangentPoint momentum_match(const DiscretizationMap& map, const LagrangianDef& L, const Vector& qk,
                              const Vector& pk, double h, const NewtonConfig& cfg = {});

// Newmark family as a map on TQ (dimension 2n).
DiscretizationMap newmark_map(double gamma, double beta, double h, int n);

// max |R2(T R1 (Gamma_hat)) - R1(T R2 (Gamma_hat))| over samples, 1-norm.
double sode_commutativity_residual(const DiscretizationMap& map, const SodeDef& G,
                                   const std::vector<TangentPoint>& samples);

// Trajectories ---------------------------------------------------------------

using StepFn = std::function<Vector(const Vector&, double)>;

struct Trajectory {
  std::vector<Vector> states;
  double h = 0.0;
  std::vector<long> newton_iters;  // per step
  std::vector<double> energy;      // per state when an energy is given
};

Trajectory integrate(const StepFn& step, const Vector& x0, double h, int steps,
                     const std::function<double(const Vector&)>& energy = {});

// Canonical J = [[0, I], [-I, 0]] of size 2n.
Matrix canonical_J(int n);

// ||M^T J M - J|| in the induced infinity norm, with M the central-difference
// Jacobian of x -> step(x, h).
double symplectic_defect(const StepFn& step, const Vector& x, double h, double fd = 1e-6);

// Steppers on the stacked state (q; p).
StepFn hamiltonian_stepper(const DiscretizationMap& map, const HamiltonianDef& H,
                           const NewtonConfig& cfg = {});

}  // namespace geomint
