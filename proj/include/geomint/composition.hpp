#pragma once

#include <string>
#include <vector>

#include "geomint/integrators.hpp"

namespace geomint {

struct StepperDef {
  StepFn step;  // (state, h) -> state
  int order = 1;
  bool symmetric = false;
  std::string label;
};

// hamiltonian_step on the stacked state (q; p). Symmetry is read off the map
// with the pointwise condition; the order is 2 for symmetric maps, else 1.
StepperDef hamiltonian_method(const DiscretizationMap& map, const HamiltonianDef& H,
                              const NewtonConfig& cfg = {});

// s*(x, h) = s^-1(x, -h), inverted by Newton with a difference Jacobian.
StepperDef adjoint_method(const StepperDef& s, const NewtonConfig& cfg = {});

// Substeps gamma_i h applied in index order, gamma_1 first.
StepperDef compose(const std::vector<StepperDef>& steppers, const std::vector<double>& gammas);

// Stormer-Verlet solved directly from its three defining equations.
StepperDef stormer_verlet(const HamiltonianDef& H, const NewtonConfig& cfg = {});

// The same method as two lifted half steps: map (q, q + v) then (q - v, q).
StepperDef stormer_verlet_composed(const HamiltonianDef& H, const NewtonConfig& cfg = {});

// Symmetric triple jump raising a symmetric method of even order p to p + 2.
std::vector<double> triple_jump_coefficients(int base_order);
StepperDef triple_jump(const StepperDef& s);

struct OrderConditions {
  double sum = 0.0;
  double cube_sum = 0.0;
  bool satisfied = false;
};

OrderConditions check_order_conditions(const std::vector<double>& gammas);

// sup |R(z) - swap(R(q, -v))| over the samples (1-norm).
double pointwise_symmetry_condition(const DiscretizationMap& map, const std::vector<TangentPoint>& samples);

}  // namespace geomint
