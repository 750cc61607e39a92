#include "geomint/lifts.hpp"

namespace geomint {

using ad::scalar_t;

namespace {

void same_lengths(std::initializer_list<const Vector*> xs, const char* what) {
  Eigen::Index n = (*xs.begin())->size();
  for (const Vector* x : xs)
    if (x->size() != n) throw RejectedInput(std::string(what) + ": length mismatch");
}

template <class S>
Vec<S> cat4(const auto& a, const auto& b, const auto& c, const auto& d) {
  Vec<S> out(a.size() + b.size() + c.size() + d.size());
  out << a, b, c, d;
  return out;
}

}  // namespace

DoubleTangent kappa(const DoubleTangent& w) {
  same_lengths({&w.q, &w.v, &w.qdot, &w.vdot}, "kappa");
  return {w.q, w.qdot, w.v, w.vdot};
}

TangentCovector alpha(const PhaseTangent& pt) {
  same_lengths({&pt.q, &pt.p, &pt.qdot, &pt.pdot}, "alpha");
  return {pt.q, pt.qdot, pt.pdot, pt.p};
}

PhaseTangent alpha_inv(const TangentCovector& c) {
  same_lengths({&c.q, &c.qdot, &c.pdot, &c.p}, "alpha_inv");
  return {c.q, c.p, c.qdot, c.pdot};
}

PairCovector phi(const CotangentPoint& a0, const CotangentPoint& a1) {
  same_lengths({&a0.q, &a0.p, &a1.q, &a1.p}, "phi");
  return {a0.q, a1.q, -a0.p, a1.p};
}

std::pair<CotangentPoint, CotangentPoint> phi_inv(const PairCovector& c) {
  same_lengths({&c.q0, &c.q1, &c.mp0, &c.p1}, "phi_inv");
  return {{c.q0, -c.mp0}, {c.q1, c.p1}};
}

DiscretizationMap tangent_lift(const DiscretizationMap& map) {
  const int n = map.dim();
  MapDef def;
  def.name = "T(" + map.name() + ")";
  def.dim = 2 * n;
  def.newton = map.def().newton;
  def.pair = [map, n](const auto& z) {
    using S = scalar_t<decltype(z)>;
    if constexpr (!ad::has_headroom_v<S>) {
      throw DerivativeOrderError();
      return Vec<S>();
    } else {
      Vec<S> base = stack<S>(Vec<S>(z.segment(0, n)), Vec<S>(z.segment(2 * n, n)));
      Vec<S> dir = stack<S>(Vec<S>(z.segment(n, n)), Vec<S>(z.segment(3 * n, n)));
      Vec<ad::Dual<S>> y = map.eval<ad::Dual<S>>(ad::seed<S>(base, dir));
      Vec<S> x = ad::values(y), u = ad::derivs(y);
      return cat4<S>(x.head(n), u.head(n), x.tail(n), u.tail(n));
    }
  };
  def.inverse = [map, n](const auto& X) {
    using S = scalar_t<decltype(X)>;
    if constexpr (!ad::has_headroom_v<S>) {
      throw DerivativeOrderError();
      return Vec<S>();
    } else {
      Vec<S> z = map.invert<S>(stack<S>(Vec<S>(X.segment(0, n)), Vec<S>(X.segment(2 * n, n))));
      Mat<S> D = map.jacobian_at<S>(z);
      Vec<S> d = ad::solve<S>(D, stack<S>(Vec<S>(X.segment(n, n)), Vec<S>(X.segment(3 * n, n))));
      return cat4<S>(z.head(n), d.head(n), z.tail(n), d.tail(n));
    }
  };
  if (map.def().guard) {
    auto g = map.def().guard;
    def.guard = [g, n](const Vector& base, const Vector& vel) { return g(base.head(n), vel.head(n)); };
  }
  return DiscretizationMap(std::move(def));
}

DiscretizationMap cotangent_lift(const DiscretizationMap& map) {
  const int n = map.dim();
  MapDef def;
  def.name = "T*(" + map.name() + ")";
  def.dim = 2 * n;
  def.newton = map.def().newton;
  def.pair = [map, n](const auto& z) {
    using S = scalar_t<decltype(z)>;
    if constexpr (!ad::has_headroom_v<S>) {
      throw DerivativeOrderError();
      return Vec<S>();
    } else {
      Vec<S> w = stack<S>(Vec<S>(z.segment(0, n)), Vec<S>(z.segment(2 * n, n)));
      Vec<S> x = map.eval<S>(w);
      Mat<S> D = map.jacobian_at<S>(w);
      Vec<S> rhs = stack<S>(Vec<S>(z.segment(3 * n, n)), Vec<S>(z.segment(n, n)));
      Vec<S> r = ad::solve<S>(Mat<S>(D.transpose()), rhs);
      return cat4<S>(x.head(n), Vec<S>(-r.head(n)), x.tail(n), r.tail(n));
    }
  };
  def.inverse = [map, n](const auto& X) {
    using S = scalar_t<decltype(X)>;
    if constexpr (!ad::has_headroom_v<S>) {
      throw DerivativeOrderError();
      return Vec<S>();
    } else {
      Vec<S> z = map.invert<S>(stack<S>(Vec<S>(X.segment(0, n)), Vec<S>(X.segment(2 * n, n))));
      Mat<S> D = map.jacobian_at<S>(z);
      Vec<S> cov = stack<S>(Vec<S>(-X.segment(n, n)), Vec<S>(X.segment(3 * n, n)));
      Vec<S> mom = D.transpose() * cov;  // (p_q; p_v)
      return cat4<S>(z.head(n), mom.tail(n), z.tail(n), mom.head(n));
    }
  };
  if (map.def().guard) {
    auto g = map.def().guard;
    def.guard = [g, n](const Vector& base, const Vector& vel) { return g(base.head(n), vel.head(n)); };
  }
  return DiscretizationMap(std::move(def));
}

double pairing_T(const PhaseTangent& v, const DoubleTangent& w, double tol) {
  same_lengths({&v.q, &v.p, &v.qdot, &v.pdot, &w.q, &w.v, &w.qdot, &w.vdot}, "pairing_T");
  if ((w.q - v.q).lpNorm<Eigen::Infinity>() > tol || (w.v - v.qdot).lpNorm<Eigen::Infinity>() > tol)
    throw RejectedInput("pairing_T: base points do not match");
  return v.pdot.dot(w.qdot) + v.p.dot(w.vdot);
}

double pairing_pair(const PairCovector& c, const Vector& x0, const Vector& u0, const Vector& x1,
                    const Vector& u1, double tol) {
  same_lengths({&c.q0, &c.q1, &c.mp0, &c.p1, &x0, &u0, &x1, &u1}, "pairing_pair");
  if ((c.q0 - x0).lpNorm<Eigen::Infinity>() > tol || (c.q1 - x1).lpNorm<Eigen::Infinity>() > tol)
    throw RejectedInput("pairing_pair: base points do not match");
  return c.mp0.dot(u0) + c.p1.dot(u1);
}

}  // namespace geomint
