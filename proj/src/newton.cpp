#include "geomint/newton.hpp"

#include <cmath>
#include <sstream>

#include "geomint/errors.hpp"

namespace geomint {

long& newton_iteration_counter() {
  thread_local long count = 0;
  return count;
}

Matrix fd_jacobian(const std::function<Vector(const Vector&)>& F, const Vector& x, double step) {
  Matrix J;
  Vector xp = x, xm = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    double hj = step * std::max(1.0, std::abs(x[j]));
    xp[j] = x[j] + hj;
    xm[j] = x[j] - hj;
    Vector d = (F(xp) - F(xm)) / (2 * hj);
    if (j == 0) J.resize(d.size(), x.size());
    J.col(j) = d;
    xp[j] = xm[j] = x[j];
  }
  return J;
}

namespace {

double inf_norm(const Vector& r) { return r.size() ? r.lpNorm<Eigen::Infinity>() : 0.0; }

bool finite(const Vector& r) { return r.allFinite(); }

NewtonResult run(const std::function<Vector(const Vector&)>& F,
                 const std::function<Matrix(const Vector&)>& J, const Vector& guess,
                 const NewtonConfig& cfg) {
  if (!(cfg.tol > 0)) throw RejectedInput("newton: tol must be positive");
  NewtonResult res;
  res.x = guess;
  Vector r = F(res.x);
  if (!finite(r)) throw ConvergenceFailure("newton: non-finite residual at initial guess", INFINITY, 0);
  res.residual = inf_norm(r);
  while (res.residual >= cfg.tol) {
    if (res.iterations >= cfg.max_iter) {
      std::ostringstream os;
      os << "newton: no convergence after " << res.iterations << " iterations, residual "
         << res.residual;
      throw ConvergenceFailure(os.str(), res.residual, res.iterations);
    }
    Matrix A = J(res.x);
    if (A.rows() != A.cols() || A.rows() != r.size())
      throw RejectedInput("newton: residual is not square");
    Eigen::PartialPivLU<Matrix> lu(A);
    if (!(lu.rcond() > 1e-15)) throw SingularMatrix("newton: singular Jacobian");
    Vector dx = lu.solve(-r);
    // Backtrack while the residual grows.
    double t = 1.0;
    Vector xn, rn;
    for (int k = 0; k < 30; ++k) {
      xn = res.x + t * dx;
      rn = F(xn);
      if (finite(rn) && inf_norm(rn) < res.residual) break;
      t *= 0.5;
    }
    ++res.iterations;
    ++newton_iteration_counter();
    if (!finite(rn) || !(inf_norm(rn) < res.residual)) {
      // No descent possible: we are at the roundoff floor or stuck.
      std::ostringstream os;
      os << "newton: stalled at residual " << res.residual;
      throw ConvergenceFailure(os.str(), res.residual, res.iterations);
    }
    res.x = xn;
    r = rn;
    res.residual = inf_norm(r);
  }
  // One polishing step, kept only if it does not increase the residual.
  if (res.iterations > 0 && res.residual > 0) {
    Matrix A = J(res.x);
    Eigen::PartialPivLU<Matrix> lu(A);
    if (lu.rcond() > 1e-15) {
      Vector xn = res.x + lu.solve(-r);
      Vector rn = F(xn);
      if (finite(rn) && inf_norm(rn) <= res.residual) {
        res.x = xn;
        res.residual = inf_norm(rn);
      }
    }
  }
  return res;
}

}  // namespace

NewtonResult newton_solve(const ad::VectorFn& F, const Vector& guess, const NewtonConfig& cfg) {
  auto f = [&](const Vector& x) -> Vector { return F(x); };
  if (cfg.jacobian_mode == JacobianMode::FD)
    return run(f, [&](const Vector& x) { return fd_jacobian(f, x, cfg.fd_step); }, guess, cfg);
  return run(f, [&](const Vector& x) { return ad::jacobian<double>(F, x); }, guess, cfg);
}

NewtonResult newton_solve_fd(const std::function<Vector(const Vector&)>& F, const Vector& guess,
                          const NewtonConfig& cfg) {
  return run(F, [&](const Vector& x) { return fd_jacobian(F, x, cfg.fd_step); }, guess, cfg);
}

}  // namespace geomint
