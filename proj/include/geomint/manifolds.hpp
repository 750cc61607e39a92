#pragma once

#include <Eigen/Dense>

#include "geomint/integrators.hpp"

namespace geomint {

// Sphere S^2 in ambient coordinates ---------------------------------------------

struct SphereCotangent {
  Vector x;  // unit 3-vector
  Vector p;  // x . p = 0
};

// ((x - xi/2)/|x - xi/2|, (x + xi/2)/|x + xi/2|) with closed-form inverse.
DiscretizationMap sphere_projection_map(double radius = 1.0);

// (x, (x + xi)/|x + xi|) with inverse (x0, x1/(x0.x1) - x0).
DiscretizationMap sphere_one_sided_map(double radius = 1.0);

// Great-circle map (cos(|xi|/2) x -/+ sin(|xi|/2) xi/|xi|).
DiscretizationMap sphere_exp_map(double radius = 3.141592653589793);

// Orthonormal basis (3 x 2) of the tangent plane at x.
Matrix sphere_tangent_basis(const Vector& x);

// Unit base points with tangent velocities of size up to vel_scale.
std::vector<TangentPoint> sphere_samples(int count, std::uint64_t seed, double vel_scale = 0.5);

struct SphereStepInfo {
  int iterations = 0;
  double normal_residual = 0.0;  // x_k component of the first equation, left out of the solve
  double norm_drift = 0.0;       // |(|x_{k+1}| - 1)| before re-projection
  double tangency_drift = 0.0;   // |x_{k+1} . p_{k+1}| before re-projection
};

// Symplectic step on T*S^2 from the one-sided projection map:
//   x1/(x.x1) - x = h dH/dp(x, p1 C),  -p + (x.x1) p1 = -h dH/dq(x, p1 C),
// c_ij = (x.x1)(delta_ij - x1_i x1_j + (x.x1) x1_i x_j). H acts on the stacked
// ambient (x; p).
SphereCotangent sphere_hamiltonian_step(const HamiltonianDef& H, const SphereCotangent& s, double h,
                                        bool reproject = true, const NewtonConfig& cfg = {},
                                        SphereStepInfo* info = nullptr);

// Spherical coordinates (theta, phi) for the cross-check with flat machinery.
HamiltonianDef sphere_chart_free_hamiltonian();
SphereCotangent sphere_from_chart(const Vector& qp);
Vector sphere_to_chart(const SphereCotangent& s);

// SO(3) through the Cayley map ------------------------------------------------------

Eigen::Matrix3d hat(const Eigen::Vector3d& a);
Eigen::Vector3d vee(const Eigen::Matrix3d& M);
Eigen::Matrix3d cay(const Eigen::Vector3d& a);      // (I - a^/2)^-1 (I + a^/2)
Eigen::Vector3d cay_inv(const Eigen::Matrix3d& R);  // vee(2 (I + R)^-1 (R - I))

// Chart map on the Lie-algebra coordinate a of A cay(a). The velocity xi is
// the chart velocity; Omega = B(a) xi is the body angular velocity and
// R_d(a, xi) = (cay^-1(cay(a) cay(-Omega/2)), cay^-1(cay(a) cay(Omega/2))).
DiscretizationMap so3_cayley_map(double radius = 1.0);

// B(a) with (cay(a)^-1 d cay(a)[xi])^ = (B(a) xi)^.
Eigen::Matrix3d cayley_body_jacobian(const Eigen::Vector3d& a);

// Group values (A cay(R1), A cay(R2)) of the chart map.
std::pair<Eigen::Matrix3d, Eigen::Matrix3d> so3_group_pair(const Eigen::Matrix3d& A, const Eigen::Vector3d& a,
                                                           const Eigen::Vector3d& xi);

// Free rigid body in the chart: pi = B(a)^-T p, H = pi . I^-1 pi / 2.
HamiltonianDef rigid_body_hamiltonian(const Eigen::Vector3d& inertia);

struct RigidBodyState {
  Eigen::Matrix3d anchor = Eigen::Matrix3d::Identity();
  Vector a = Vector::Zero(3);
  Vector p = Vector::Zero(3);
};

Eigen::Matrix3d attitude(const RigidBodyState& s);
Eigen::Vector3d body_momentum(const RigidBodyState& s);
RigidBodyState rigid_body_from_body(const Eigen::Matrix3d& R, const Eigen::Vector3d& pi);

// One symplectic step of the cotangent-lifted chart map; the chart is moved
// to the current attitude whenever |a| exceeds reanchor_radius.
RigidBodyState rigid_body_step(const HamiltonianDef& H, const RigidBodyState& s, double h,
                               double reanchor_radius = 0.5, const NewtonConfig& cfg = {});

}  // namespace geomint
