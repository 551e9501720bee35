#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cbfsim/fields.hpp"

namespace cbfsim::model {

/// Control-affine model xdot = f(x) + g(x) u, optionally extended with a
/// diffusion sigma(x) (SDE) and a bounded-disturbance channel M w, w in a
/// hypercube.
struct ControlAffineModel {
  int n = 0;  // state dimension
  int m = 0;  // input dimension
  VectorFieldPtr drift;      // f: R^n -> R^n
  MatrixFieldPtr actuation;  // g: R^n -> R^{n x m}
  std::optional<MatrixFieldPtr> diffusion;              // sigma: R^n -> R^{n x q}
  std::optional<Eigen::MatrixXd> disturbance_matrix;    // n x l, zero-one
  std::optional<std::vector<std::pair<double, double>>> disturbance_bounds;  // per channel
  std::optional<std::pair<Eigen::VectorXd, Eigen::VectorXd>> input_bounds;   // box on u
  std::vector<std::string> labels;
  std::string name;

  void validate() const;
};

struct Dynamics {
  Eigen::VectorXd f;
  Eigen::MatrixXd g;
};

/// Evaluate (f, g) at (t, x). Built-in models are time-invariant; t is kept
/// in the signature for interface parity with time-varying extensions.
Dynamics dynamics(const ControlAffineModel& model, double t, const Eigen::VectorXd& x);

/// Jacobian of the closed-loop drift f(x) + g(x) u with respect to x.
Eigen::MatrixXd closed_loop_jacobian(const ControlAffineModel& model, const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& u);

enum class BuiltinModel { dynamic_unicycle, single_integrator_2d, double_integrator_1d, van_der_pol };

/// Named model library. van_der_pol takes parameter "mu" (default 1).
ControlAffineModel builtin(BuiltinModel which, const sym::ParamMap& params = {});
ControlAffineModel builtin(const std::string& name, const sym::ParamMap& params = {});

/// Model whose dynamics evaluate DSL expressions; all state references must
/// be below n and the actuation matrix must be n x m.
ControlAffineModel from_expressions(const std::vector<sym::Expr>& drift_exprs,
                                    const std::vector<std::vector<sym::Expr>>& actuation_exprs,
                                    int n, int m, sym::ParamMap params = {});

}  // namespace cbfsim::model
