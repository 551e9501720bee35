#include <cctype>
#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "cbfsim/symbolic/expr.hpp"

namespace cbfsim::sym {

namespace {

enum class TokenKind { Number, Ident, Plus, Minus, Star, Slash, Pow, LParen, RParen, LBracket, RBracket, Comma, End };

struct Token {
  TokenKind kind;
  std::size_t pos;
  std::string text;
  double number = 0.0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= src_.size()) return {TokenKind::End, start, ""};
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      double value = 0.0;
      const char* begin = src_.data() + pos_;
      const char* end = src_.data() + src_.size();
      auto [ptr, ec] = std::from_chars(begin, end, value);
      if (ec != std::errc{})
        throw ParseError("invalid number literal", start, std::string(1, c));
      pos_ = static_cast<std::size_t>(ptr - src_.data());
      return {TokenKind::Number, start, std::string(begin, ptr), value};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
        ++end;
      Token t{TokenKind::Ident, start, std::string(src_.substr(pos_, end - pos_))};
      pos_ = end;
      return t;
    }
    ++pos_;
    switch (c) {
      case '+': return {TokenKind::Plus, start, "+"};
      case '-': return {TokenKind::Minus, start, "-"};
      case '*':
        if (pos_ < src_.size() && src_[pos_] == '*') {
          ++pos_;
          return {TokenKind::Pow, start, "**"};
        }
        return {TokenKind::Star, start, "*"};
      case '/': return {TokenKind::Slash, start, "/"};
      case '^': return {TokenKind::Pow, start, "^"};
      case '(': return {TokenKind::LParen, start, "("};
      case ')': return {TokenKind::RParen, start, ")"};
      case '[': return {TokenKind::LBracket, start, "["};
      case ']': return {TokenKind::RBracket, start, "]"};
      case ',': return {TokenKind::Comma, start, ","};
      default:
        throw ParseError("unexpected character", start, std::string(1, c));
    }
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
};

UnaryOp function_op(const std::string& name, std::size_t pos) {
  if (name == "sin") return UnaryOp::Sin;
  if (name == "cos") return UnaryOp::Cos;
  if (name == "tan") return UnaryOp::Tan;
  if (name == "exp") return UnaryOp::Exp;
  if (name == "log") return UnaryOp::Log;
  if (name == "sqrt") return UnaryOp::Sqrt;
  if (name == "abs") return UnaryOp::Abs;
  if (name == "sign") return UnaryOp::Sign;
  throw UnknownFunctionError("unknown function '" + name + "' at position " + std::to_string(pos));
}

// Grammar (see docs/expression-grammar.md):
//   expression := term { ('+'|'-') term }
//   term       := unary { ('*'|'/') unary }
//   unary      := ('-'|'+') unary | power
//   power      := primary { ('^'|'**') pow_rhs }          (left-associative)
//   pow_rhs    := ('-'|'+') pow_rhs | primary
//   primary    := number | 'x' '[' integer ']' | name '(' args ')' | name
//                 | '(' expression ')'
class Parser {
 public:
  Parser(std::string_view src, int state_dim) : lexer_(src), state_dim_(state_dim) {
    advance();
  }

  Expr parse_all() {
    Expr e = parse_expression();
    if (cur_.kind != TokenKind::End)
      throw ParseError("unexpected trailing token", cur_.pos, cur_.text);
    return e;
  }

 private:
  void advance() { cur_ = lexer_.next(); }

  bool accept(TokenKind k) {
    if (cur_.kind != k) return false;
    advance();
    return true;
  }

  void expect(TokenKind k, const char* what) {
    if (cur_.kind != k) throw ParseError(std::string("expected ") + what, cur_.pos, cur_.text);
    advance();
  }

  Expr parse_expression() {
    Expr lhs = parse_term();
    while (cur_.kind == TokenKind::Plus || cur_.kind == TokenKind::Minus) {
      const BinaryOp op = cur_.kind == TokenKind::Plus ? BinaryOp::Add : BinaryOp::Sub;
      advance();
      lhs = Expr::binary(op, std::move(lhs), parse_term());
    }
    return lhs;
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    while (cur_.kind == TokenKind::Star || cur_.kind == TokenKind::Slash) {
      const BinaryOp op = cur_.kind == TokenKind::Star ? BinaryOp::Mul : BinaryOp::Div;
      advance();
      lhs = Expr::binary(op, std::move(lhs), parse_unary());
    }
    return lhs;
  }

  Expr parse_unary() {
    if (accept(TokenKind::Minus)) return Expr::unary(UnaryOp::Neg, parse_unary());
    if (accept(TokenKind::Plus)) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr lhs = parse_primary();
    while (cur_.kind == TokenKind::Pow) {
      advance();
      lhs = Expr::binary(BinaryOp::Pow, std::move(lhs), parse_pow_rhs());
    }
    return lhs;
  }

  Expr parse_pow_rhs() {
    if (accept(TokenKind::Minus)) return Expr::unary(UnaryOp::Neg, parse_pow_rhs());
    if (accept(TokenKind::Plus)) return parse_pow_rhs();
    return parse_primary();
  }

  Expr parse_primary() {
    if (cur_.kind == TokenKind::Number) {
      const double v = cur_.number;
      advance();
      return Expr::constant(v);
    }
    if (cur_.kind == TokenKind::LParen) {
      advance();
      Expr e = parse_expression();
      expect(TokenKind::RParen, "')'");
      return e;
    }
    if (cur_.kind == TokenKind::Ident) {
      const Token ident = cur_;
      advance();
      if (ident.text == "x") {
        expect(TokenKind::LBracket, "'[' after state symbol 'x'");
        if (cur_.kind != TokenKind::Number)
          throw ParseError("expected state index", cur_.pos, cur_.text);
        const double raw = cur_.number;
        const int idx = static_cast<int>(raw);
        if (raw != static_cast<double>(idx) || idx < 0)
          throw ParseError("state index must be a non-negative integer", cur_.pos, cur_.text);
        advance();
        expect(TokenKind::RBracket, "']'");
        if (idx >= state_dim_)
          throw IndexOutOfRangeError("state index x[" + std::to_string(idx) +
                                     "] out of range for declared state dimension " +
                                     std::to_string(state_dim_));
        return Expr::state(idx);
      }
      if (cur_.kind == TokenKind::LParen) {
        advance();
        if (ident.text == "min" || ident.text == "max") {
          std::vector<Expr> args;
          args.push_back(parse_expression());
          while (accept(TokenKind::Comma)) args.push_back(parse_expression());
          expect(TokenKind::RParen, "')'");
          if (args.size() < 2)
            throw ParseError(ident.text + " expects at least 2 arguments", ident.pos, ident.text);
          return ident.text == "min" ? Expr::min(std::move(args)) : Expr::max(std::move(args));
        }
        const UnaryOp op = function_op(ident.text, ident.pos);
        Expr arg = parse_expression();
        if (cur_.kind == TokenKind::Comma)
          throw ParseError(ident.text + " expects exactly 1 argument", cur_.pos, cur_.text);
        expect(TokenKind::RParen, "')'");
        return Expr::unary(op, std::move(arg));
      }
      // bare identifier: named parameter
      return Expr::parameter(ident.text);
    }
    throw ParseError("expected expression", cur_.pos, cur_.text);
  }

  Lexer lexer_;
  int state_dim_;
  Token cur_{TokenKind::End, 0, ""};
};

}  // namespace

Expr parse(std::string_view source, int state_dim) {
  return Parser(source, state_dim).parse_all();
}

}  // namespace cbfsim::sym
