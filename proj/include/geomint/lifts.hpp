#pragma once

#include "geomint/core.hpp"

namespace geomint {

struct CotangentPoint {
  Vector q;
  Vector p;
};

// Element (q, p, qdot, pdot) of TT*Q.
struct PhaseTangent {
  Vector q, p, qdot, pdot;
};

// Element (q, v, qdot, vdot) of TTQ.
struct DoubleTangent {
  Vector q, v, qdot, vdot;
};

// Element (q, qdot, pdot, p) of T*TQ, the image of alpha.
struct TangentCovector {
  Vector q, qdot, pdot, p;
};

// Covector (q0, q1, -p0, p1) on Q x Q, the image of phi.
struct PairCovector {
  Vector q0, q1, mp0, p1;
};

// (q, v, qdot, vdot) -> (q, qdot, v, vdot); an involution.
DoubleTangent kappa(const DoubleTangent& w);

TangentCovector alpha(const PhaseTangent& pt);
PhaseTangent alpha_inv(const TangentCovector& c);

PairCovector phi(const CotangentPoint& a0, const CotangentPoint& a1);
std::pair<CotangentPoint, CotangentPoint> phi_inv(const PairCovector& c);

// Lift to TQ: base (q, qdot), velocity (v, vdot); stacked input
// (q, qdot, v, vdot) maps to (R1, DR1 (qdot, vdot), R2, DR2 (qdot, vdot)).
DiscretizationMap tangent_lift(const DiscretizationMap& map);

// Lift to T*Q: base (q, p), velocity (qdot, pdot); stacked input
// (q, p, qdot, pdot) maps to (q0, p0, q1, p1). Momenta are row vectors:
// (pdot, p) = (-p0, p1) DR(q, qdot).
DiscretizationMap cotangent_lift(const DiscretizationMap& map);

// <alpha(v), w> for v in TT*Q and w = (q, v, dq, dv) in TTQ:
// pdot . dq + p . dv. Requires w.q = v.q and w.v = v.qdot.
double pairing_T(const PhaseTangent& v, const DoubleTangent& w, double tol = 1e-12);

// <(q0, q1, -p0, p1), (x0, u0, x1, u1)> = -p0 . u0 + p1 . u1, with the base
// points required to match.
double pairing_pair(const PairCovector& c, const Vector& x0, const Vector& u0, const Vector& x1,
                    const Vector& u1, double tol = 1e-12);

}  // namespace geomint
