#include "cbfsim/symbolic/expr.hpp"

#include <algorithm>
#include <cstdio>

namespace cbfsim::sym {

namespace {

std::shared_ptr<const ExprNode> make_node(ExprNode n) {
  return std::make_shared<const ExprNode>(std::move(n));
}

bool is_const_value(const Expr& e, double v) {
  return e.kind() == NodeKind::Constant && e.node().constant == v;
}

bool is_constant(const Expr& e) { return e.kind() == NodeKind::Constant; }

// Smart constructors used when building derivative trees: fold constants and
// drop additive/multiplicative identities so results stay readable. The
// parser never uses these; parsed structure is preserved verbatim.
Expr s_add(Expr a, Expr b) {
  if (is_const_value(a, 0.0)) return b;
  if (is_const_value(b, 0.0)) return a;
  if (is_constant(a) && is_constant(b))
    return Expr::constant(a.node().constant + b.node().constant);
  return Expr::binary(BinaryOp::Add, std::move(a), std::move(b));
}

Expr s_neg(Expr a) {
  if (is_const_value(a, 0.0)) return a;
  return Expr::unary(UnaryOp::Neg, std::move(a));
}

Expr s_sub(Expr a, Expr b) {
  if (is_const_value(b, 0.0)) return a;
  if (is_const_value(a, 0.0)) return s_neg(std::move(b));
  if (is_constant(a) && is_constant(b))
    return Expr::constant(a.node().constant - b.node().constant);
  return Expr::binary(BinaryOp::Sub, std::move(a), std::move(b));
}

Expr s_mul(Expr a, Expr b) {
  if (is_const_value(a, 0.0) || is_const_value(b, 0.0)) return Expr::constant(0.0);
  if (is_const_value(a, 1.0)) return b;
  if (is_const_value(b, 1.0)) return a;
  if (is_constant(a) && is_constant(b))
    return Expr::constant(a.node().constant * b.node().constant);
  return Expr::binary(BinaryOp::Mul, std::move(a), std::move(b));
}

Expr s_div(Expr a, Expr b) {
  if (is_const_value(a, 0.0)) return a;
  if (is_const_value(b, 1.0)) return a;
  return Expr::binary(BinaryOp::Div, std::move(a), std::move(b));
}

Expr s_pow(Expr base, Expr expo) {
  if (is_const_value(expo, 1.0)) return base;
  if (is_const_value(expo, 0.0)) return Expr::constant(1.0);
  return Expr::binary(BinaryOp::Pow, std::move(base), std::move(expo));
}

}  // namespace

Expr Expr::constant(double c) {
  ExprNode n;
  n.kind = NodeKind::Constant;
  n.constant = c;
  return Expr(make_node(std::move(n)));
}

Expr Expr::state(int index) {
  if (index < 0) throw IndexOutOfRangeError("negative state index");
  ExprNode n;
  n.kind = NodeKind::StateRef;
  n.index = index;
  return Expr(make_node(std::move(n)));
}

Expr Expr::parameter(std::string name) {
  ExprNode n;
  n.kind = NodeKind::Parameter;
  n.name = std::move(name);
  return Expr(make_node(std::move(n)));
}

Expr Expr::unary(UnaryOp op, Expr child) {
  ExprNode n;
  n.kind = NodeKind::Unary;
  n.uop = op;
  n.children.push_back(std::move(child));
  return Expr(make_node(std::move(n)));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  ExprNode n;
  n.kind = NodeKind::Binary;
  n.bop = op;
  n.children.push_back(std::move(lhs));
  n.children.push_back(std::move(rhs));
  return Expr(make_node(std::move(n)));
}

Expr Expr::min(std::vector<Expr> children) {
  if (children.size() < 2) throw Error("min requires at least 2 children");
  ExprNode n;
  n.kind = NodeKind::Min;
  n.children = std::move(children);
  return Expr(make_node(std::move(n)));
}

Expr Expr::max(std::vector<Expr> children) {
  if (children.size() < 2) throw Error("max requires at least 2 children");
  ExprNode n;
  n.kind = NodeKind::Max;
  n.children = std::move(children);
  return Expr(make_node(std::move(n)));
}

int Expr::max_state_index() const {
  const ExprNode& n = *node_;
  if (n.kind == NodeKind::StateRef) return n.index;
  int mx = -1;
  for (const Expr& c : n.children) mx = std::max(mx, c.max_state_index());
  return mx;
}

bool Expr::depends_on_state() const { return max_state_index() >= 0; }

namespace {

// Left-fold prefix of a Min/Max node: children[0..count).
Expr prefix_of(NodeKind kind, const std::vector<Expr>& children, std::size_t count) {
  if (count == 1) return children[0];
  std::vector<Expr> slice(children.begin(), children.begin() + static_cast<long>(count));
  return kind == NodeKind::Min ? Expr::min(std::move(slice)) : Expr::max(std::move(slice));
}

}  // namespace

Expr Expr::derivative(int wrt, const DiffOptions& options) const {
  const ExprNode& n = *node_;
  switch (n.kind) {
    case NodeKind::Constant:
    case NodeKind::Parameter:
      return constant(0.0);
    case NodeKind::StateRef:
      return constant(n.index == wrt ? 1.0 : 0.0);
    case NodeKind::Unary: {
      const Expr& u = n.children[0];
      Expr du = u.derivative(wrt, options);
      switch (n.uop) {
        case UnaryOp::Neg: return s_neg(std::move(du));
        case UnaryOp::Sin: return s_mul(unary(UnaryOp::Cos, u), std::move(du));
        case UnaryOp::Cos: return s_neg(s_mul(unary(UnaryOp::Sin, u), std::move(du)));
        case UnaryOp::Tan: {
          Expr c = unary(UnaryOp::Cos, u);
          return s_div(std::move(du), s_mul(c, c));
        }
        case UnaryOp::Exp: return s_mul(unary(UnaryOp::Exp, u), std::move(du));
        case UnaryOp::Log: return s_div(std::move(du), u);
        case UnaryOp::Sqrt:
          return s_div(std::move(du), s_mul(constant(2.0), unary(UnaryOp::Sqrt, u)));
        case UnaryOp::Abs: return s_mul(unary(UnaryOp::Sign, u), std::move(du));
        case UnaryOp::Sign: return constant(0.0);
      }
      break;
    }
    case NodeKind::Binary: {
      const Expr& a = n.children[0];
      const Expr& b = n.children[1];
      Expr da = a.derivative(wrt, options);
      Expr db = b.derivative(wrt, options);
      switch (n.bop) {
        case BinaryOp::Add: return s_add(std::move(da), std::move(db));
        case BinaryOp::Sub: return s_sub(std::move(da), std::move(db));
        case BinaryOp::Mul:
          return s_add(s_mul(std::move(da), b), s_mul(a, std::move(db)));
        case BinaryOp::Div:
          return s_div(s_sub(s_mul(std::move(da), b), s_mul(a, std::move(db))), s_mul(b, b));
        case BinaryOp::Pow: {
          if (!b.depends_on_state()) {
            // d/dx u^c = c * u^(c-1) * u'
            Expr c_minus_1 = is_constant(b) ? constant(b.node().constant - 1.0)
                                            : s_sub(b, constant(1.0));
            return s_mul(s_mul(b, s_pow(a, std::move(c_minus_1))), std::move(da));
          }
          // d/dx u^w = u^w * (w' log u + w u'/u)
          Expr self = binary(BinaryOp::Pow, a, b);
          Expr term = s_add(s_mul(std::move(db), unary(UnaryOp::Log, a)),
                            s_div(s_mul(b, std::move(da)), a));
          return s_mul(std::move(self), std::move(term));
        }
      }
      break;
    }
    case NodeKind::Min:
    case NodeKind::Max: {
      if (!options.subgradient)
        throw NonDifferentiableError(
            std::string(n.kind == NodeKind::Min ? "min" : "max") +
            " is not differentiable; enable subgradient mode to take the active branch");
      // Fold pairwise via min(a,b) = (a+b-|b-a|)/2 (max: +|a-b|), whose
      // derivative selects the active branch with ties going to the first
      // child (sign(0) = +1).
      const bool is_min = n.kind == NodeKind::Min;
      Expr dacc = n.children[0].derivative(wrt, options);
      for (std::size_t i = 1; i < n.children.size(); ++i) {
        Expr acc_val = prefix_of(n.kind, n.children, i);
        const Expr& c = n.children[i];
        Expr dc = c.derivative(wrt, options);
        Expr gap = is_min ? s_sub(c, acc_val) : s_sub(acc_val, c);
        Expr sel = unary(UnaryOp::Sign, std::move(gap));
        Expr delta = is_min ? s_sub(dc, dacc) : s_sub(dacc, dc);
        Expr diffpart = s_mul(std::move(sel), std::move(delta));
        Expr sum = s_add(dacc, dc);
        Expr combined = is_min ? s_sub(std::move(sum), std::move(diffpart))
                               : s_add(std::move(sum), std::move(diffpart));
        dacc = s_mul(constant(0.5), std::move(combined));
      }
      return dacc;
    }
  }
  throw Error("corrupt expression node");
}

bool structurally_equal(const Expr& a, const Expr& b) {
  const ExprNode& na = a.node();
  const ExprNode& nb = b.node();
  if (na.kind != nb.kind) return false;
  switch (na.kind) {
    case NodeKind::Constant:
      return na.constant == nb.constant;
    case NodeKind::StateRef:
      return na.index == nb.index;
    case NodeKind::Parameter:
      return na.name == nb.name;
    case NodeKind::Unary:
      if (na.uop != nb.uop) return false;
      break;
    case NodeKind::Binary:
      if (na.bop != nb.bop) return false;
      break;
    case NodeKind::Min:
    case NodeKind::Max:
      break;
  }
  if (na.children.size() != nb.children.size()) return false;
  for (std::size_t i = 0; i < na.children.size(); ++i)
    if (!structurally_equal(na.children[i], nb.children[i])) return false;
  return true;
}

namespace {

// Printer precedence; higher binds tighter.
constexpr int kPrecAddSub = 1;
constexpr int kPrecMulDiv = 2;
constexpr int kPrecNeg = 3;
constexpr int kPrecPow = 4;
constexpr int kPrecAtom = 5;

int precedence(const ExprNode& n) {
  switch (n.kind) {
    case NodeKind::Binary:
      switch (n.bop) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return kPrecAddSub;
        case BinaryOp::Mul:
        case BinaryOp::Div: return kPrecMulDiv;
        case BinaryOp::Pow: return kPrecPow;
      }
      return kPrecAtom;
    case NodeKind::Unary:
      return n.uop == UnaryOp::Neg ? kPrecNeg : kPrecAtom;
    default:
      return kPrecAtom;
  }
}

const char* function_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::Sin: return "sin";
    case UnaryOp::Cos: return "cos";
    case UnaryOp::Tan: return "tan";
    case UnaryOp::Exp: return "exp";
    case UnaryOp::Log: return "log";
    case UnaryOp::Sqrt: return "sqrt";
    case UnaryOp::Abs: return "abs";
    case UnaryOp::Sign: return "sign";
    case UnaryOp::Neg: return "-";
  }
  return "?";
}

std::string format_double(double v) {
  // 17 significant digits: reparsing reproduces the exact bits
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void print(const Expr& e, std::string& out) {
  const ExprNode& n = e.node();
  const int prec = precedence(n);
  auto child = [&](const Expr& c, bool needs_parens) {
    if (needs_parens) out += '(';
    print(c, out);
    if (needs_parens) out += ')';
  };
  switch (n.kind) {
    case NodeKind::Constant:
      out += format_double(n.constant);
      return;
    case NodeKind::StateRef:
      out += "x[" + std::to_string(n.index) + "]";
      return;
    case NodeKind::Parameter:
      out += n.name;
      return;
    case NodeKind::Unary:
      if (n.uop == UnaryOp::Neg) {
        out += '-';
        child(n.children[0], precedence(n.children[0].node()) < prec);
      } else {
        out += function_name(n.uop);
        out += '(';
        print(n.children[0], out);
        out += ')';
      }
      return;
    case NodeKind::Binary: {
      const char* sym = nullptr;
      switch (n.bop) {
        case BinaryOp::Add: sym = " + "; break;
        case BinaryOp::Sub: sym = " - "; break;
        case BinaryOp::Mul: sym = " * "; break;
        case BinaryOp::Div: sym = " / "; break;
        case BinaryOp::Pow: sym = " ** "; break;
      }
      child(n.children[0], precedence(n.children[0].node()) < prec);
      out += sym;
      // same-precedence right children need parens: all operators parse
      // left-associative
      child(n.children[1], precedence(n.children[1].node()) <= prec);
      return;
    }
    case NodeKind::Min:
    case NodeKind::Max:
      out += n.kind == NodeKind::Min ? "min(" : "max(";
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) out += ", ";
        print(n.children[i], out);
      }
      out += ')';
      return;
  }
}

}  // namespace

std::string Expr::str() const {
  std::string out;
  print(*this, out);
  return out;
}

Expr operator+(Expr a, Expr b) { return Expr::binary(BinaryOp::Add, std::move(a), std::move(b)); }
Expr operator-(Expr a, Expr b) { return Expr::binary(BinaryOp::Sub, std::move(a), std::move(b)); }
Expr operator*(Expr a, Expr b) { return Expr::binary(BinaryOp::Mul, std::move(a), std::move(b)); }
Expr operator/(Expr a, Expr b) { return Expr::binary(BinaryOp::Div, std::move(a), std::move(b)); }
Expr operator-(Expr a) { return Expr::unary(UnaryOp::Neg, std::move(a)); }

}  // namespace cbfsim::sym
