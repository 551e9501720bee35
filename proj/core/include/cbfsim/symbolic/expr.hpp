#pragma once

#include <Eigen/Core>
#include <cmath>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cbfsim/errors.hpp"
#include "cbfsim/symbolic/dual.hpp"

namespace cbfsim::sym {

using ParamMap = std::map<std::string, double>;

enum class NodeKind { Constant, StateRef, Parameter, Unary, Binary, Min, Max };
enum class UnaryOp { Neg, Sin, Cos, Tan, Exp, Log, Sqrt, Abs, Sign };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

struct DiffOptions {
  /// When set, Min/Max differentiate to the active branch's derivative
  /// (ties broken by the first child); otherwise they raise
  /// NonDifferentiableError.
  bool subgradient = false;
};

class Expr;
struct ExprNode {
  NodeKind kind = NodeKind::Constant;
  double constant = 0.0;       // Constant
  int index = -1;              // StateRef
  std::string name;            // Parameter
  UnaryOp uop = UnaryOp::Neg;  // Unary
  BinaryOp bop = BinaryOp::Add;
  std::vector<Expr> children;
};

/// Immutable expression tree. Handles share nodes; all operations are pure.
class Expr {
 public:
  Expr() = default;

  static Expr constant(double c);
  static Expr state(int index);
  static Expr parameter(std::string name);
  static Expr unary(UnaryOp op, Expr child);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
  static Expr min(std::vector<Expr> children);
  static Expr max(std::vector<Expr> children);

  bool valid() const { return node_ != nullptr; }
  const ExprNode& node() const { return *node_; }
  NodeKind kind() const { return node_->kind; }

  /// Largest state index referenced, or -1 when state-free.
  int max_state_index() const;
  bool depends_on_state() const;

  template <class S>
  S evaluate(std::span<const S> x, const ParamMap& params = {}) const;
  double operator()(const Eigen::VectorXd& x, const ParamMap& params = {}) const {
    return evaluate(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())), params);
  }

  /// Symbolic partial derivative with respect to state index `wrt`.
  Expr derivative(int wrt, const DiffOptions& options = {}) const;

  /// Render in DSL syntax; parsing the result reproduces the structure.
  std::string str() const;

 private:
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const ExprNode> node_;
};

bool structurally_equal(const Expr& a, const Expr& b);

/// Parse DSL source against a declared state dimension. Throws ParseError,
/// IndexOutOfRangeError, or UnknownFunctionError.
Expr parse(std::string_view source, int state_dim);

// Convenience builders used by tests and model construction.
Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);
Expr operator-(Expr a);

// --- template implementation -------------------------------------------------

template <class S>
S Expr::evaluate(std::span<const S> x, const ParamMap& params) const {
  const ExprNode& n = *node_;
  switch (n.kind) {
    case NodeKind::Constant:
      return S(n.constant);
    case NodeKind::StateRef:
      if (n.index < 0 || static_cast<std::size_t>(n.index) >= x.size())
        throw IndexOutOfRangeError("state index x[" + std::to_string(n.index) +
                                   "] out of range for state of dimension " +
                                   std::to_string(x.size()));
      return x[static_cast<std::size_t>(n.index)];
    case NodeKind::Parameter: {
      auto it = params.find(n.name);
      if (it == params.end()) throw UnboundParameterError(n.name);
      return S(it->second);
    }
    case NodeKind::Unary: {
      S c = n.children[0].evaluate(x, params);
      using std::abs;
      using std::cos;
      using std::exp;
      using std::log;
      using std::sin;
      using std::sqrt;
      using std::tan;
      switch (n.uop) {
        case UnaryOp::Neg: return -c;
        case UnaryOp::Sin: return sin(c);
        case UnaryOp::Cos: return cos(c);
        case UnaryOp::Tan: return tan(c);
        case UnaryOp::Exp: return exp(c);
        case UnaryOp::Log: return log(c);
        case UnaryOp::Sqrt: return sqrt(c);
        case UnaryOp::Abs: return abs(c);
        case UnaryOp::Sign: return sign(c);
      }
      break;
    }
    case NodeKind::Binary: {
      S a = n.children[0].evaluate(x, params);
      S b = n.children[1].evaluate(x, params);
      using std::pow;
      switch (n.bop) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div: return a / b;
        case BinaryOp::Pow: return pow(a, b);
      }
      break;
    }
    case NodeKind::Min:
    case NodeKind::Max: {
      S acc = n.children[0].evaluate(x, params);
      if (std::isnan(value_of(acc))) return acc;
      for (std::size_t i = 1; i < n.children.size(); ++i) {
        S c = n.children[i].evaluate(x, params);
        if (std::isnan(value_of(c))) return c;
        const bool take = n.kind == NodeKind::Min ? value_of(c) < value_of(acc)
                                                  : value_of(c) > value_of(acc);
        if (take) acc = c;
      }
      return acc;
    }
  }
  throw Error("corrupt expression node");
}

}  // namespace cbfsim::sym
