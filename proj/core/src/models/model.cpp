#include "cbfsim/models/model.hpp"

#include <cmath>

#include "cbfsim/errors.hpp"

namespace cbfsim::model {

void ControlAffineModel::validate() const {
  if (n <= 0 || m <= 0) throw DimensionMismatchError("model dimensions must be positive");
  if (!drift || drift->dim() != n || drift->out_dim() != n)
    throw DimensionMismatchError("drift must map R^n -> R^n");
  if (!actuation || actuation->dim() != n || actuation->rows() != n || actuation->cols() != m)
    throw DimensionMismatchError("actuation must map R^n -> R^{n x m}");
  if (diffusion && ((*diffusion)->dim() != n || (*diffusion)->rows() != n))
    throw DimensionMismatchError("diffusion must map R^n -> R^{n x q}");
  if (disturbance_matrix) {
    const Eigen::MatrixXd& M = *disturbance_matrix;
    if (M.rows() != n) throw DimensionMismatchError("disturbance matrix must have n rows");
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      int nonzero = 0;
      for (Eigen::Index j = 0; j < M.cols(); ++j) {
        if (M(i, j) != 0.0 && M(i, j) != 1.0)
          throw Error("disturbance matrix entries must be 0 or 1");
        if (M(i, j) == 1.0) ++nonzero;
      }
      if (nonzero > 1) throw Error("disturbance matrix rows admit at most one non-zero element");
    }
    if (disturbance_bounds &&
        static_cast<Eigen::Index>(disturbance_bounds->size()) != M.cols())
      throw DimensionMismatchError("disturbance bounds must match the disturbance channel count");
  }
  if (input_bounds && (input_bounds->first.size() != m || input_bounds->second.size() != m))
    throw DimensionMismatchError("input bounds must have length m");
}

Dynamics dynamics(const ControlAffineModel& model, double /*t*/, const Eigen::VectorXd& x) {
  if (x.size() != model.n)
    throw DimensionMismatchError("state has dimension " + std::to_string(x.size()) +
                                 ", model expects " + std::to_string(model.n));
  return Dynamics{(*model.drift)(x), (*model.actuation)(x)};
}

Eigen::MatrixXd closed_loop_jacobian(const ControlAffineModel& model, const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& u) {
  if (x.size() != model.n || u.size() != model.m)
    throw DimensionMismatchError("closed_loop_jacobian dimension mismatch");
  const int n = model.n;
  const int m = model.m;
  const auto& drift = model.drift;
  const auto& act = model.actuation;
  std::vector<double> uv(u.data(), u.data() + m);
  auto field = make_vector_field(
      n, n, [drift, act, uv, n, m]<class S>(std::span<const S> x_in) -> std::vector<S> {
        std::vector<S> f = drift->value(x_in);
        std::vector<S> g = act->value_flat(x_in);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < m; ++j)
            f[static_cast<std::size_t>(i)] =
                f[static_cast<std::size_t>(i)] +
                g[static_cast<std::size_t>(i * m + j)] * uv[static_cast<std::size_t>(j)];
        return f;
      });
  return field->jacobian(x);
}

namespace {

ControlAffineModel make_dynamic_unicycle() {
  ControlAffineModel mdl;
  mdl.name = "dynamic_unicycle";
  mdl.n = 4;
  mdl.m = 2;
  mdl.labels = {"x_e", "y_e", "v_e", "theta_e"};
  mdl.drift = make_vector_field(4, 4, []<class S>(std::span<const S> x) -> std::vector<S> {
    using std::cos;
    using std::sin;
    return {x[2] * cos(x[3]), x[2] * sin(x[3]), S(0.0), S(0.0)};
  });
  Eigen::MatrixXd g(4, 2);
  g << 0, 0, 0, 0, 1, 0, 0, 1;
  mdl.actuation = make_constant_matrix_field(4, g);
  return mdl;
}

ControlAffineModel make_single_integrator_2d() {
  ControlAffineModel mdl;
  mdl.name = "single_integrator_2d";
  mdl.n = 2;
  mdl.m = 2;
  mdl.labels = {"x_h", "y_h"};
  mdl.drift = make_vector_field(2, 2, []<class S>(std::span<const S>) -> std::vector<S> {
    return {S(0.0), S(0.0)};
  });
  mdl.actuation = make_constant_matrix_field(2, Eigen::MatrixXd::Identity(2, 2));
  return mdl;
}

ControlAffineModel make_double_integrator_1d() {
  ControlAffineModel mdl;
  mdl.name = "double_integrator_1d";
  mdl.n = 2;
  mdl.m = 1;
  mdl.labels = {"p", "v"};
  mdl.drift = make_vector_field(2, 2, []<class S>(std::span<const S> x) -> std::vector<S> {
    return {x[1], S(0.0)};
  });
  Eigen::MatrixXd g(2, 1);
  g << 0, 1;
  mdl.actuation = make_constant_matrix_field(2, g);
  return mdl;
}

ControlAffineModel make_van_der_pol(double mu) {
  ControlAffineModel mdl;
  mdl.name = "van_der_pol";
  mdl.n = 2;
  mdl.m = 1;
  mdl.labels = {"x1", "x2"};
  mdl.drift = make_vector_field(2, 2, [mu]<class S>(std::span<const S> x) -> std::vector<S> {
    return {x[1], S(mu) * (S(1.0) - x[0] * x[0]) * x[1] - x[0]};
  });
  Eigen::MatrixXd g(2, 1);
  g << 0, 1;
  mdl.actuation = make_constant_matrix_field(2, g);
  return mdl;
}

}  // namespace

ControlAffineModel builtin(BuiltinModel which, const sym::ParamMap& params) {
  switch (which) {
    case BuiltinModel::dynamic_unicycle: return make_dynamic_unicycle();
    case BuiltinModel::single_integrator_2d: return make_single_integrator_2d();
    case BuiltinModel::double_integrator_1d: return make_double_integrator_1d();
    case BuiltinModel::van_der_pol: {
      auto it = params.find("mu");
      return make_van_der_pol(it != params.end() ? it->second : 1.0);
    }
  }
  throw UnknownModelError("unknown builtin model");
}

ControlAffineModel builtin(const std::string& name, const sym::ParamMap& params) {
  if (name == "dynamic_unicycle") return builtin(BuiltinModel::dynamic_unicycle, params);
  if (name == "single_integrator_2d") return builtin(BuiltinModel::single_integrator_2d, params);
  if (name == "double_integrator_1d") return builtin(BuiltinModel::double_integrator_1d, params);
  if (name == "van_der_pol") return builtin(BuiltinModel::van_der_pol, params);
  throw UnknownModelError("unknown builtin model '" + name + "'");
}

ControlAffineModel from_expressions(const std::vector<sym::Expr>& drift_exprs,
                                    const std::vector<std::vector<sym::Expr>>& actuation_exprs,
                                    int n, int m, sym::ParamMap params) {
  if (static_cast<int>(drift_exprs.size()) != n)
    throw DimensionMismatchError("drift expressions must have length n = " + std::to_string(n));
  if (static_cast<int>(actuation_exprs.size()) != n)
    throw DimensionMismatchError("actuation expression matrix must have n rows");
  for (const auto& row : actuation_exprs)
    if (static_cast<int>(row.size()) != m)
      throw DimensionMismatchError("actuation expression matrix must have m columns");
  ControlAffineModel mdl;
  mdl.name = "expression_model";
  mdl.n = n;
  mdl.m = m;
  mdl.drift = make_expr_vector_field(drift_exprs, n, params);
  mdl.actuation = make_expr_matrix_field(actuation_exprs, n, params);
  mdl.validate();
  return mdl;
}

}  // namespace cbfsim::model
