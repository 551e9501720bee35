#pragma once

#include <Eigen/Core>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "cbfsim/errors.hpp"
#include "cbfsim/symbolic/dual.hpp"
#include "cbfsim/symbolic/expr.hpp"

namespace cbfsim {

// Type-erased scalar/vector functions of the state that can be evaluated at
// nested dual-number levels. Level k supports k-th order derivatives; the
// library instantiates levels 0..4, which bounds iterated Lie derivatives
// (and hence rectifiable relative degree) at 4.
inline constexpr int kMaxDualLevel = 4;

class ScalarField {
 public:
  virtual ~ScalarField() = default;

  int dim() const { return dim_; }
  /// Deepest dual level this field can be evaluated at. Composing a Lie
  /// derivative consumes one level.
  int max_level() const { return max_level_; }

  virtual double value(std::span<const double> x) const = 0;
  virtual sym::Dual1 value(std::span<const sym::Dual1> x) const = 0;
  virtual sym::Dual2 value(std::span<const sym::Dual2> x) const = 0;
  virtual sym::Dual3 value(std::span<const sym::Dual3> x) const = 0;
  virtual sym::Dual4 value(std::span<const sym::Dual4> x) const = 0;

  double operator()(const Eigen::VectorXd& x) const;

  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  std::vector<double> gradient(std::span<const double> x) const;
  std::vector<sym::Dual1> gradient(std::span<const sym::Dual1> x) const;
  std::vector<sym::Dual2> gradient(std::span<const sym::Dual2> x) const;
  std::vector<sym::Dual3> gradient(std::span<const sym::Dual3> x) const;
  [[noreturn]] std::vector<sym::Dual4> gradient(std::span<const sym::Dual4>) const {
    throw Error("derivative order exceeds the supported dual nesting depth (4)");
  }

 protected:
  ScalarField(int dim, int max_level) : dim_(dim), max_level_(max_level) {}
  int dim_;
  int max_level_;
};

using ScalarFieldPtr = std::shared_ptr<const ScalarField>;

class VectorField {
 public:
  virtual ~VectorField() = default;

  int dim() const { return dim_; }
  int out_dim() const { return out_dim_; }
  int max_level() const { return max_level_; }

  virtual std::vector<double> value(std::span<const double> x) const = 0;
  virtual std::vector<sym::Dual1> value(std::span<const sym::Dual1> x) const = 0;
  virtual std::vector<sym::Dual2> value(std::span<const sym::Dual2> x) const = 0;
  virtual std::vector<sym::Dual3> value(std::span<const sym::Dual3> x) const = 0;
  virtual std::vector<sym::Dual4> value(std::span<const sym::Dual4> x) const = 0;

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;
  /// Jacobian J(i, j) = d out_i / d x_j, computed by one dual pass.
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;

 protected:
  VectorField(int dim, int out_dim, int max_level)
      : dim_(dim), out_dim_(out_dim), max_level_(max_level) {}
  int dim_;
  int out_dim_;
  int max_level_;
};

using VectorFieldPtr = std::shared_ptr<const VectorField>;

/// Matrix-valued field, stored row-major over a VectorField of size
/// rows*cols.
class MatrixField {
 public:
  MatrixField(VectorFieldPtr flat, int rows, int cols);

  int dim() const { return flat_->dim(); }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int max_level() const { return flat_->max_level(); }
  const VectorFieldPtr& flat() const { return flat_; }

  Eigen::MatrixXd operator()(const Eigen::VectorXd& x) const;

  template <class S>
  std::vector<S> value_flat(std::span<const S> x) const {
    return flat_->value(x);
  }

 private:
  VectorFieldPtr flat_;
  int rows_;
  int cols_;
};

using MatrixFieldPtr = std::shared_ptr<const MatrixField>;

namespace detail {

template <class F>
class LambdaScalarField final : public ScalarField {
 public:
  LambdaScalarField(int dim, int max_level, F f)
      : ScalarField(dim, max_level), f_(std::move(f)) {}
  double value(std::span<const double> x) const override { return f_(x); }
  sym::Dual1 value(std::span<const sym::Dual1> x) const override { return f_(x); }
  sym::Dual2 value(std::span<const sym::Dual2> x) const override { return f_(x); }
  sym::Dual3 value(std::span<const sym::Dual3> x) const override { return f_(x); }
  sym::Dual4 value(std::span<const sym::Dual4> x) const override { return f_(x); }

 private:
  F f_;
};

template <class F>
class LambdaVectorField final : public VectorField {
 public:
  LambdaVectorField(int dim, int out_dim, int max_level, F f)
      : VectorField(dim, out_dim, max_level), f_(std::move(f)) {}
  std::vector<double> value(std::span<const double> x) const override { return f_(x); }
  std::vector<sym::Dual1> value(std::span<const sym::Dual1> x) const override { return f_(x); }
  std::vector<sym::Dual2> value(std::span<const sym::Dual2> x) const override { return f_(x); }
  std::vector<sym::Dual3> value(std::span<const sym::Dual3> x) const override { return f_(x); }
  std::vector<sym::Dual4> value(std::span<const sym::Dual4> x) const override { return f_(x); }

 private:
  F f_;
};

}  // namespace detail

template <class F>
ScalarFieldPtr make_scalar_field(int dim, F f, int max_level = kMaxDualLevel) {
  return std::make_shared<detail::LambdaScalarField<F>>(dim, max_level, std::move(f));
}

template <class F>
VectorFieldPtr make_vector_field(int dim, int out_dim, F f, int max_level = kMaxDualLevel) {
  return std::make_shared<detail::LambdaVectorField<F>>(dim, out_dim, max_level, std::move(f));
}

/// Field evaluating a DSL expression; parameters are bound at construction.
ScalarFieldPtr make_expr_field(sym::Expr e, int dim, sym::ParamMap params = {});

/// Field evaluating a vector of DSL expressions componentwise.
VectorFieldPtr make_expr_vector_field(std::vector<sym::Expr> components, int dim,
                                      sym::ParamMap params = {});

MatrixFieldPtr make_constant_matrix_field(int dim, const Eigen::MatrixXd& value);
MatrixFieldPtr make_expr_matrix_field(const std::vector<std::vector<sym::Expr>>& entries, int dim,
                                      sym::ParamMap params = {});

template <class F>
MatrixFieldPtr make_matrix_field(int dim, int rows, int cols, F f,
                                 int max_level = kMaxDualLevel) {
  return std::make_shared<MatrixField>(make_vector_field(dim, rows * cols, std::move(f), max_level),
                                       rows, cols);
}

/// L_f h = grad(h) . f, itself a field one dual level shallower than its
/// operands.
ScalarFieldPtr lie_derivative(ScalarFieldPtr h, VectorFieldPtr f);

/// a + k*b
ScalarFieldPtr add_scaled(ScalarFieldPtr a, double k, ScalarFieldPtr b);

/// View a lower-dimensional field as a field over the leading coordinates of
/// a larger state (remaining coordinates are ignored, their partials zero).
ScalarFieldPtr lift_to_dimension(ScalarFieldPtr f, int new_dim);

}  // namespace cbfsim
