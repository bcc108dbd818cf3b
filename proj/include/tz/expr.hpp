#pragma once

// Immersion formula language: expressions in u, v with second-order jets.

#include "tz/types.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

namespace tz::expr {

/// Value and partial derivatives up to order two in (u, v).
struct Jet2 {
  double value = 0.0;
  double du = 0.0;
  double dv = 0.0;
  double duu = 0.0;
  double duv = 0.0;
  double dvv = 0.0;

  static Jet2 constant(double c) { return {c, 0, 0, 0, 0, 0}; }
};

Jet2 operator+(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a);
Jet2 operator*(const Jet2& a, const Jet2& b);
/// Composition f∘a given f(a), f'(a), f''(a).
Jet2 compose(const Jet2& a, double f, double df, double ddf);

enum class NodeKind { Constant, VarU, VarV, Neg, Sin, Cos, Exp, Sqrt, Add, Sub, Mul, Div, Pow };

struct Node {
  NodeKind kind = NodeKind::Constant;
  double value = 0.0;  // Constant
  int exponent = 0;    // Pow
  std::size_t offset = 0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

/// Error raised by the parser or by evaluation; carries the byte offset.
class ExprError : public Error {
 public:
  ExprError(ErrorKind kind, std::size_t offset, const std::string& what)
      : Error(kind, what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// An immutable parsed expression.
class Expr {
 public:
  Expr() = default;
  explicit Expr(std::shared_ptr<const Node> root, std::string source = {})
      : root_(std::move(root)), source_(std::move(source)) {}

  const Node& root() const { return *root_; }
  const std::string& source() const { return source_; }
  bool empty() const { return !root_; }

  double eval(double u, double v) const { return eval_jet2(u, v).value; }
  Jet2 eval_jet2(double u, double v) const;

  /// Fully parenthesized text; parse(to_string()) reproduces the tree.
  std::string to_string() const;

 private:
  std::shared_ptr<const Node> root_;
  std::string source_;
};

Expr parse(std::string_view source);

Jet2 eval_jet2(const Expr& e, double u, double v);

bool structurally_equal(const Node& a, const Node& b);
inline bool structurally_equal(const Expr& a, const Expr& b) {
  return structurally_equal(a.root(), b.root());
}

}  // namespace tz::expr
