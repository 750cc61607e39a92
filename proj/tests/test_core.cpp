#include <gtest/gtest.h>

#include "geomint/core.hpp"

using namespace geomint;
using ad::scalar_t;

namespace {

Vector v1(double a) { return Vector::Constant(1, a); }

// R1(x,v) = x, R2(x,v) = x + 2v.
DiscretizationMap broken_map() {
  MapDef def;
  def.name = "broken";
  def.dim = 1;
  def.pair = [](const auto& z) {
    using S = scalar_t<decltype(z)>;
    Vec<S> x(2);
    x << z[0], z[0] + 2.0 * z[1];
    return x;
  };
  return DiscretizationMap(def);
}

// A nonlinear map without a closed-form inverse.
DiscretizationMap warped_map() {
  MapDef def;
  def.name = "warped";
  def.dim = 2;
  def.pair = [](const auto& z) {
    using S = scalar_t<decltype(z)>;
    Vec<S> x(4);
    for (int i = 0; i < 2; ++i) {
      x[i] = z[i] - 0.5 * z[2 + i] + 0.1 * ad::sin(z[i]) * z[2 + i] * z[2 + i];
      x[2 + i] = z[i] + 0.5 * z[2 + i] + 0.05 * z[2 + i] * z[2 + i];
    }
    return x;
  };
  return DiscretizationMap(def);
}

}  // namespace

TEST(EvalPair, HandValues) {
  auto mid = midpoint_map(1);
  auto p = eval_pair(mid, {v1(0), v1(2)});
  EXPECT_DOUBLE_EQ(p.x0[0], -1.0);
  EXPECT_DOUBLE_EQ(p.x1[0], 1.0);

  auto th = theta_map(1, 0.3);
  auto t = eval_pair(th, {v1(1), v1(1)});
  EXPECT_NEAR(t.x0[0], 0.7, 1e-15);
  EXPECT_NEAR(t.x1[0], 1.7, 1e-15);

  for (const auto& s : random_samples(3, 10, 1)) {
    auto z = eval_pair(theta_map(3, 0.7), {s.q, Vector::Zero(3)});
    EXPECT_EQ(z.x0, s.q);
    EXPECT_EQ(z.x1, s.q);
  }
}

TEST(EvalPair, RejectsBadInput) {
  EXPECT_THROW(eval_pair(midpoint_map(2), {v1(0), v1(1)}), RejectedInput);
  MapDef def = midpoint_map(1).def();
  def.guard = [](const Vector&, const Vector& v) { return v.norm() < 1.0; };
  DiscretizationMap guarded(def);
  EXPECT_THROW(eval_pair(guarded, {v1(0), v1(2)}), DomainViolation);
}

TEST(Invert, ClosedFormsAndNewton) {
  auto z = invert(midpoint_map(1), v1(0), v1(2));
  EXPECT_DOUBLE_EQ(z.q[0], 1.0);
  EXPECT_DOUBLE_EQ(z.v[0], 2.0);

  auto e = invert(explicit_euler_map(1), v1(1), v1(1.5));
  EXPECT_DOUBLE_EQ(e.q[0], 1.0);
  EXPECT_DOUBLE_EQ(e.v[0], 0.5);

  auto d = invert(theta_map(1, 0.3), v1(0.4), v1(0.4));
  EXPECT_DOUBLE_EQ(d.q[0], 0.4);
  EXPECT_DOUBLE_EQ(d.v[0], 0.0);

  auto w = warped_map();
  for (const auto& s : random_samples(2, 100, 3, 0.5)) {
    auto p = eval_pair(w, s);
    auto back = invert(w, p.x0, p.x1);
    EXPECT_LT((back.q - s.q).lpNorm<Eigen::Infinity>(), 1e-10);
    EXPECT_LT((back.v - s.v).lpNorm<Eigen::Infinity>(), 1e-10);
  }
}

TEST(Invert, InverseDerivativesFollowImplicitFunctionTheorem) {
  auto w = warped_map();
  Vector x(4);
  x << 0.1, 0.2, 0.5, 0.4;
  Vector z = w.invert<double>(x);
  Matrix Jinv(4, 4);
  for (int j = 0; j < 4; ++j) {
    Vec<ad::D1> xd = ad::seed_unit<double>(x, j);
    Jinv.col(j) = ad::derivs(w.invert<ad::D1>(xd));
  }
  Matrix J = w.jacobian_at<double>(z);
  EXPECT_LT((Jinv * J - Matrix::Identity(4, 4)).lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(Invert, NoInverseCarriesResidual) {
  MapDef def;
  def.name = "degenerate";
  def.dim = 1;
  def.pair = [](const auto& z) {
    using S = scalar_t<decltype(z)>;
    Vec<S> x(2);
    x << z[0] - 0.5 * z[1], z[0] + 0.5 * z[1] + z[1] * z[1];
    return x;
  };
  def.newton.max_iter = 20;
  DiscretizationMap m(def);
  // x1 - x0 = v + v^2 >= -1/4 has no real solution below that.
  try {
    invert(m, v1(0), v1(-1.0));
    FAIL() << "expected NoInverse";
  } catch (const NoInverse& e) {
    EXPECT_GT(e.residual(), 0.0);
  }
}

TEST(Jacobian, MidpointBlocksAndFiniteDifferences) {
  auto mid = midpoint_map(2);
  Matrix J = jacobian(mid, {Vector::Constant(2, 0.3), Vector::Constant(2, -0.2)});
  Matrix I = Matrix::Identity(2, 2);
  Matrix expect(4, 4);
  expect << I, -0.5 * I, I, 0.5 * I;
  EXPECT_TRUE(J.isApprox(expect));

  auto w = warped_map();
  for (const auto& s : random_samples(2, 10, 9, 0.5)) {
    Matrix Jad = w.jacobian_at<double>(stack<double>(s.q, s.v));
    Vector z = stack<double>(s.q, s.v);
    Matrix Jfd(4, 4);
    for (int j = 0; j < 4; ++j) {
      Vector zp = z, zm = z;
      zp[j] += 1e-6;
      zm[j] -= 1e-6;
      Jfd.col(j) = (w.eval<double>(zp) - w.eval<double>(zm)) / 2e-6;
    }
    EXPECT_LT((Jad - Jfd).lpNorm<Eigen::Infinity>(), 1e-6);
    Matrix D = w.jacobian_at<double>(stack<double>(s.q, Vector(Vector::Zero(2))));
    EXPECT_LT((D.bottomRightCorner(2, 2) - D.topRightCorner(2, 2) - I).norm(), 1e-14);
  }
}

TEST(FromRetraction, EuclideanReproducesThetaFamily) {
  auto r = euclidean_retraction(2);
  for (double th : {0.0, 0.3, 0.5, 1.0}) {
    auto m = from_retraction(r, th);
    auto ref = theta_map(2, th);
    for (const auto& s : random_samples(2, 20, 4)) {
      auto a = eval_pair(m, s);
      auto b = eval_pair(ref, s);
      EXPECT_LT((a.x0 - b.x0).norm() + (a.x1 - b.x1).norm(), 1e-15);
    }
    EXPECT_TRUE(validate(m, random_samples(2, 100, 5)).passed);
  }
  auto m0 = from_retraction(r, 0.0);
  auto p = eval_pair(m0, {Vector::Constant(2, 0.4), Vector::Constant(2, 1.0)});
  EXPECT_EQ(p.x0, Vector::Constant(2, 0.4));
  EXPECT_THROW(from_retraction(r, 1.5), RejectedInput);
}

TEST(Adjoint, ExplicitEulerAndInvolution) {
  auto adj = adjoint(explicit_euler_map(1));
  auto p = eval_pair(adj, {v1(0.3), v1(0.5)});
  EXPECT_DOUBLE_EQ(p.x0[0], 0.3 - 0.5);
  EXPECT_DOUBLE_EQ(p.x1[0], 0.3);

  auto samples = random_samples(2, 100, 11);
  auto mid = midpoint_map(2);
  auto amid = adjoint(mid);
  auto w = warped_map();
  auto aaw = adjoint(adjoint(w));
  for (const auto& s : samples) {
    auto a = eval_pair(mid, s), b = eval_pair(amid, s);
    EXPECT_LT((a.x0 - b.x0).norm() + (a.x1 - b.x1).norm(), 1e-15);
    auto c = eval_pair(w, s), d = eval_pair(aaw, s);
    EXPECT_LT((c.x0 - d.x0).norm() + (c.x1 - d.x1).norm(), 1e-12);
  }
  // The adjoint inherits an inverse and an analytic Jacobian.
  auto aeu = adjoint(theta_map(2, 0.3));
  auto rep = validate(aeu, samples);
  EXPECT_TRUE(rep.passed);
  EXPECT_TRUE(rep.inverse_checked);
  EXPECT_TRUE(rep.jacobian_checked);
}

TEST(Symmetry, ClassifiesBuiltins) {
  auto samples = random_samples(1, 50, 2);
  EXPECT_TRUE(is_symmetric(midpoint_map(1), samples).symmetric);
  EXPECT_FALSE(is_symmetric(explicit_euler_map(1), samples).symmetric);
  EXPECT_TRUE(is_symmetric(theta_map(1, 0.5), samples).symmetric);
  for (double th : {0.0, 0.2, 0.49, 0.51, 0.8, 1.0})
    EXPECT_FALSE(is_symmetric(theta_map(1, th), samples).symmetric) << th;
  auto dev = is_symmetric(explicit_euler_map(1), {{v1(0), v1(1)}}).max_deviation;
  EXPECT_DOUBLE_EQ(dev, 2.0);
}

TEST(Validate, BuiltinsPassBrokenFails) {
  for (int n : {1, 3}) {
    auto samples = random_samples(n, 100, 17);
    for (const auto& m : {midpoint_map(n), explicit_euler_map(n), symplectic_euler_map(n),
                          theta_map(n, 0.3)}) {
      auto rep = validate(m, samples);
      EXPECT_TRUE(rep.passed) << m.name();
      EXPECT_LT(rep.inverse_residual, 1e-14);
    }
  }
  auto rep = validate(broken_map(), random_samples(1, 10, 1));
  EXPECT_FALSE(rep.passed);
  EXPECT_DOUBLE_EQ(rep.derivative_residual, 1.0);
  EXPECT_DOUBLE_EQ(rep.identity_residual, 0.0);
}
