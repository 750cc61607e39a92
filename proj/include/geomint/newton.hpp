#pragma once

#include <functional>
#include <string>

#include <Eigen/Dense>

#include "geomint/autodiff.hpp"

namespace geomint {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ad::Mat;
using ad::Vec;

enum class JacobianMode { AD, FD };

struct NewtonConfig {
  double tol = 1e-12;
  int max_iter = 50;
  JacobianMode jacobian_mode = JacobianMode::AD;
  double fd_step = 1e-7;
};

struct NewtonResult {
  Vector x;
  int iterations = 0;
  double residual = 0.0;
};

// Damped Newton on F(x) = 0 until ||F||_inf < tol. The AD overload uses
// forward-mode Jacobians unless cfg asks for finite differences.
NewtonResult newton_solve(const ad::VectorFn& F, const Vector& guess, const NewtonConfig& cfg = {});
NewtonResult newton_solve_fd(const std::function<Vector(const Vector&)>& F, const Vector& guess,
                             const NewtonConfig& cfg = {});

Matrix fd_jacobian(const std::function<Vector(const Vector&)>& F, const Vector& x, double step);

// Running count of Newton iterations on this thread; the harness reads it to
// report mean iterations per step.
long& newton_iteration_counter();

}  // namespace geomint
