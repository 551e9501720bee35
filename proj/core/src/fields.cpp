#include "cbfsim/fields.hpp"

#include <algorithm>

namespace cbfsim {

namespace {

template <class S>
std::span<const S> as_span(const std::vector<S>& v) {
  return std::span<const S>(v.data(), v.size());
}

// Gradient of a field at scalar level S via one evaluation at Dual<S>.
template <class S>
std::vector<S> gradient_impl(const ScalarField& f, std::span<const S> x) {
  auto seeded = sym::seed(x);
  sym::Dual<S> y = f.value(as_span(seeded));
  std::vector<S> g(x.size(), S(0.0));
  for (std::size_t i = 0; i < y.d.size() && i < g.size(); ++i) g[i] = y.d[i];
  return g;
}

}  // namespace

double ScalarField::operator()(const Eigen::VectorXd& x) const {
  if (x.size() != dim_)
    throw DimensionMismatchError("scalar field expects dimension " + std::to_string(dim_) +
                                 ", got " + std::to_string(x.size()));
  return value(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
}

Eigen::VectorXd ScalarField::gradient(const Eigen::VectorXd& x) const {
  if (x.size() != dim_)
    throw DimensionMismatchError("scalar field expects dimension " + std::to_string(dim_) +
                                 ", got " + std::to_string(x.size()));
  std::vector<double> g =
      gradient(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  return Eigen::Map<const Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(g.size()));
}

std::vector<double> ScalarField::gradient(std::span<const double> x) const {
  return gradient_impl(*this, x);
}
std::vector<sym::Dual1> ScalarField::gradient(std::span<const sym::Dual1> x) const {
  return gradient_impl(*this, x);
}
std::vector<sym::Dual2> ScalarField::gradient(std::span<const sym::Dual2> x) const {
  return gradient_impl(*this, x);
}
std::vector<sym::Dual3> ScalarField::gradient(std::span<const sym::Dual3> x) const {
  return gradient_impl(*this, x);
}

Eigen::VectorXd VectorField::operator()(const Eigen::VectorXd& x) const {
  if (x.size() != dim_)
    throw DimensionMismatchError("vector field expects dimension " + std::to_string(dim_) +
                                 ", got " + std::to_string(x.size()));
  std::vector<double> v = value(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd VectorField::jacobian(const Eigen::VectorXd& x) const {
  if (x.size() != dim_)
    throw DimensionMismatchError("vector field expects dimension " + std::to_string(dim_) +
                                 ", got " + std::to_string(x.size()));
  auto seeded = sym::seed(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  std::vector<sym::Dual1> y = value(std::span<const sym::Dual1>(seeded.data(), seeded.size()));
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(out_dim_, dim_);
  for (int i = 0; i < out_dim_; ++i)
    for (std::size_t j = 0; j < y[static_cast<std::size_t>(i)].d.size(); ++j)
      J(i, static_cast<Eigen::Index>(j)) = y[static_cast<std::size_t>(i)].d[j];
  return J;
}

MatrixField::MatrixField(VectorFieldPtr flat, int rows, int cols)
    : flat_(std::move(flat)), rows_(rows), cols_(cols) {
  if (flat_->out_dim() != rows_ * cols_)
    throw DimensionMismatchError("matrix field storage size mismatch");
}

Eigen::MatrixXd MatrixField::operator()(const Eigen::VectorXd& x) const {
  Eigen::VectorXd v = (*flat_)(x);
  Eigen::MatrixXd out(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(i, j) = v[i * cols_ + j];
  return out;
}

ScalarFieldPtr make_expr_field(sym::Expr e, int dim, sym::ParamMap params) {
  if (e.max_state_index() >= dim)
    throw IndexOutOfRangeError("expression references x[" + std::to_string(e.max_state_index()) +
                               "] beyond dimension " + std::to_string(dim));
  return make_scalar_field(dim, [e = std::move(e), params = std::move(params)]<class S>(
                                    std::span<const S> x) -> S { return e.evaluate(x, params); });
}

VectorFieldPtr make_expr_vector_field(std::vector<sym::Expr> components, int dim,
                                      sym::ParamMap params) {
  for (const auto& e : components)
    if (e.max_state_index() >= dim)
      throw IndexOutOfRangeError("expression references x[" + std::to_string(e.max_state_index()) +
                                 "] beyond dimension " + std::to_string(dim));
  const int out_dim = static_cast<int>(components.size());
  return make_vector_field(
      dim, out_dim,
      [components = std::move(components), params = std::move(params)]<class S>(
          std::span<const S> x) -> std::vector<S> {
        std::vector<S> out;
        out.reserve(components.size());
        for (const auto& e : components) out.push_back(e.evaluate(x, params));
        return out;
      });
}

MatrixFieldPtr make_constant_matrix_field(int dim, const Eigen::MatrixXd& value) {
  const int rows = static_cast<int>(value.rows());
  const int cols = static_cast<int>(value.cols());
  std::vector<double> flat(static_cast<std::size_t>(rows * cols));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) flat[static_cast<std::size_t>(i * cols + j)] = value(i, j);
  return make_matrix_field(dim, rows, cols,
                           [flat = std::move(flat)]<class S>(std::span<const S>) -> std::vector<S> {
                             std::vector<S> out;
                             out.reserve(flat.size());
                             for (double v : flat) out.push_back(S(v));
                             return out;
                           });
}

MatrixFieldPtr make_expr_matrix_field(const std::vector<std::vector<sym::Expr>>& entries, int dim,
                                      sym::ParamMap params) {
  const int rows = static_cast<int>(entries.size());
  const int cols = rows > 0 ? static_cast<int>(entries[0].size()) : 0;
  std::vector<sym::Expr> flat;
  flat.reserve(static_cast<std::size_t>(rows * cols));
  for (const auto& row : entries) {
    if (static_cast<int>(row.size()) != cols)
      throw DimensionMismatchError("ragged expression matrix");
    for (const auto& e : row) flat.push_back(e);
  }
  return std::make_shared<MatrixField>(make_expr_vector_field(std::move(flat), dim, std::move(params)),
                                       rows, cols);
}

ScalarFieldPtr lie_derivative(ScalarFieldPtr h, VectorFieldPtr f) {
  if (h->dim() != f->dim() || f->out_dim() != f->dim())
    throw DimensionMismatchError("lie derivative requires h: R^n -> R and f: R^n -> R^n");
  const int level = std::min(h->max_level(), f->max_level()) - 1;
  if (level < 0)
    throw Error("derivative order exceeds the supported dual nesting depth (4)");
  return make_scalar_field(
      h->dim(),
      [h = std::move(h), f = std::move(f)]<class S>(std::span<const S> x) -> S {
        auto gh = h->gradient(x);
        auto fv = f->value(x);
        S acc(0.0);
        for (std::size_t i = 0; i < gh.size(); ++i) acc = acc + gh[i] * fv[i];
        return acc;
      },
      level);
}

ScalarFieldPtr add_scaled(ScalarFieldPtr a, double k, ScalarFieldPtr b) {
  if (a->dim() != b->dim()) throw DimensionMismatchError("field dimension mismatch in add_scaled");
  const int level = std::min(a->max_level(), b->max_level());
  return make_scalar_field(
      a->dim(),
      [a = std::move(a), k, b = std::move(b)]<class S>(std::span<const S> x) -> S {
        return a->value(x) + S(k) * b->value(x);
      },
      level);
}

ScalarFieldPtr lift_to_dimension(ScalarFieldPtr f, int new_dim) {
  if (new_dim == f->dim()) return f;
  if (new_dim < f->dim())
    throw DimensionMismatchError("cannot lift a field to a smaller dimension");
  const int inner = f->dim();
  return make_scalar_field(
      new_dim,
      [f = std::move(f), inner]<class S>(std::span<const S> x) -> S {
        return f->value(x.first(static_cast<std::size_t>(inner)));
      },
      f->max_level());
}

}  // namespace cbfsim
