#include "tz/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

namespace tz::expr {

Jet2 operator+(const Jet2& a, const Jet2& b) {
  return {a.value + b.value, a.du + b.du, a.dv + b.dv, a.duu + b.duu, a.duv + b.duv, a.dvv + b.dvv};
}

Jet2 operator-(const Jet2& a, const Jet2& b) {
  return {a.value - b.value, a.du - b.du, a.dv - b.dv, a.duu - b.duu, a.duv - b.duv, a.dvv - b.dvv};
}

Jet2 operator-(const Jet2& a) { return {-a.value, -a.du, -a.dv, -a.duu, -a.duv, -a.dvv}; }

Jet2 operator*(const Jet2& a, const Jet2& b) {
  return {a.value * b.value,
          a.du * b.value + a.value * b.du,
          a.dv * b.value + a.value * b.dv,
          a.duu * b.value + 2.0 * a.du * b.du + a.value * b.duu,
          a.duv * b.value + a.du * b.dv + a.dv * b.du + a.value * b.duv,
          a.dvv * b.value + 2.0 * a.dv * b.dv + a.value * b.dvv};
}

Jet2 compose(const Jet2& a, double f, double df, double ddf) {
  return {f,
          df * a.du,
          df * a.dv,
          ddf * a.du * a.du + df * a.duu,
          ddf * a.du * a.dv + df * a.duv,
          ddf * a.dv * a.dv + df * a.dvv};
}

namespace {

using NodePtr = std::shared_ptr<const Node>;

NodePtr make(NodeKind kind, std::size_t offset, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->offset = offset;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse_all() {
    NodePtr e = parse_sum();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected character '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ExprError(ErrorKind::SyntaxError, pos_, msg);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      skip_ws();
      const std::size_t at = pos_;
      if (accept('+')) {
        lhs = make(NodeKind::Add, at, lhs, parse_product());
      } else if (accept('-')) {
        lhs = make(NodeKind::Sub, at, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      skip_ws();
      const std::size_t at = pos_;
      if (accept('*')) {
        lhs = make(NodeKind::Mul, at, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = make(NodeKind::Div, at, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    skip_ws();
    const std::size_t at = pos_;
    if (accept('-')) return make(NodeKind::Neg, at, parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    for (;;) {
      skip_ws();
      const std::size_t at = pos_;
      if (!accept('^')) return base;
      skip_ws();
      int sign = 1;
      if (accept('-')) sign = -1;
      else accept('+');
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (start == pos_) {
        pos_ = start;
        fail("expected integer exponent");
      }
      int value = 0;
      const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
      if (res.ec != std::errc()) {
        pos_ = start;
        fail("exponent out of range");
      }
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::Pow;
      n->offset = at;
      n->exponent = sign * value;
      n->lhs = base;
      base = n;
    }
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        pos_ = p;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Constant;
    n->offset = start;
    n->value = value;
    return n;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    const std::size_t at = pos_;
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_sum();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      const std::string_view name = src_.substr(at, pos_ - at);
      if (name == "u") return make(NodeKind::VarU, at);
      if (name == "v") return make(NodeKind::VarV, at);
      if (name == "pi") {
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::Constant;
        n->offset = at;
        n->value = std::numbers::pi;
        return n;
      }
      NodeKind kind;
      if (name == "sin") kind = NodeKind::Sin;
      else if (name == "cos") kind = NodeKind::Cos;
      else if (name == "exp") kind = NodeKind::Exp;
      else if (name == "sqrt") kind = NodeKind::Sqrt;
      else throw ExprError(ErrorKind::UnknownIdentifier, at, "unknown identifier '" + std::string(name) + "'");
      if (!accept('(')) fail("expected '(' after function name");
      NodePtr arg = parse_sum();
      if (!accept(')')) fail("expected ')'");
      return make(kind, at, arg);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }
};

Jet2 eval_node(const Node& n, double u, double v) {
  switch (n.kind) {
    case NodeKind::Constant: return Jet2::constant(n.value);
    case NodeKind::VarU: return {u, 1, 0, 0, 0, 0};
    case NodeKind::VarV: return {v, 0, 1, 0, 0, 0};
    case NodeKind::Neg: return -eval_node(*n.lhs, u, v);
    case NodeKind::Sin: {
      const Jet2 a = eval_node(*n.lhs, u, v);
      const double s = std::sin(a.value), c = std::cos(a.value);
      return compose(a, s, c, -s);
    }
    case NodeKind::Cos: {
      const Jet2 a = eval_node(*n.lhs, u, v);
      const double s = std::sin(a.value), c = std::cos(a.value);
      return compose(a, c, -s, -c);
    }
    case NodeKind::Exp: {
      const Jet2 a = eval_node(*n.lhs, u, v);
      const double e = std::exp(a.value);
      return compose(a, e, e, e);
    }
    case NodeKind::Sqrt: {
      const Jet2 a = eval_node(*n.lhs, u, v);
      // sqrt is not differentiable at 0, so zero is rejected along with negatives.
      if (!(a.value > 0.0)) throw ExprError(ErrorKind::DomainError, n.offset, "sqrt of non-positive value");
      const double s = std::sqrt(a.value);
      return compose(a, s, 0.5 / s, -0.25 / (s * a.value));
    }
    case NodeKind::Add: return eval_node(*n.lhs, u, v) + eval_node(*n.rhs, u, v);
    case NodeKind::Sub: return eval_node(*n.lhs, u, v) - eval_node(*n.rhs, u, v);
    case NodeKind::Mul: return eval_node(*n.lhs, u, v) * eval_node(*n.rhs, u, v);
    case NodeKind::Div: {
      const Jet2 a = eval_node(*n.lhs, u, v);
      const Jet2 b = eval_node(*n.rhs, u, v);
      if (b.value == 0.0) throw ExprError(ErrorKind::DomainError, n.offset, "division by zero");
      const double r = 1.0 / b.value;
      return a * compose(b, r, -r * r, 2.0 * r * r * r);
    }
    case NodeKind::Pow: {
      const Jet2 a = eval_node(*n.lhs, u, v);
      const int k = n.exponent;
      if (k == 0) return Jet2::constant(1.0);
      if (k < 0 && a.value == 0.0)
        throw ExprError(ErrorKind::DomainError, n.offset, "negative power of zero");
      const double f = std::pow(a.value, k);
      const double df = k * std::pow(a.value, k - 1);
      const double ddf = (k == 1) ? 0.0 : k * (k - 1) * std::pow(a.value, k - 2);
      return compose(a, f, df, ddf);
    }
  }
  return {};
}

void print(const Node& n, std::ostringstream& os) {
  auto binary = [&](const char* op) {
    os << '(';
    print(*n.lhs, os);
    os << ' ' << op << ' ';
    print(*n.rhs, os);
    os << ')';
  };
  auto call = [&](const char* name) {
    os << name << '(';
    print(*n.lhs, os);
    os << ')';
  };
  switch (n.kind) {
    case NodeKind::Constant: {
      char buf[64];
      const auto res = std::to_chars(buf, buf + sizeof buf, n.value);
      os << std::string_view(buf, res.ptr - buf);
      break;
    }
    case NodeKind::VarU: os << 'u'; break;
    case NodeKind::VarV: os << 'v'; break;
    case NodeKind::Neg:
      os << "(-";
      print(*n.lhs, os);
      os << ')';
      break;
    case NodeKind::Sin: call("sin"); break;
    case NodeKind::Cos: call("cos"); break;
    case NodeKind::Exp: call("exp"); break;
    case NodeKind::Sqrt: call("sqrt"); break;
    case NodeKind::Add: binary("+"); break;
    case NodeKind::Sub: binary("-"); break;
    case NodeKind::Mul: binary("*"); break;
    case NodeKind::Div: binary("/"); break;
    case NodeKind::Pow:
      os << '(';
      print(*n.lhs, os);
      os << " ^ " << n.exponent << ')';
      break;
  }
}

}  // namespace

Expr parse(std::string_view source) {
  Parser p(source);
  return Expr(p.parse_all(), std::string(source));
}

Jet2 Expr::eval_jet2(double u, double v) const {
  if (!root_) throw Error(ErrorKind::InvalidArgument, "evaluating an empty expression");
  return eval_node(*root_, u, v);
}

Jet2 eval_jet2(const Expr& e, double u, double v) { return e.eval_jet2(u, v); }

std::string Expr::to_string() const {
  std::ostringstream os;
  if (root_) print(*root_, os);
  return os.str();
}

bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == NodeKind::Constant && a.value != b.value) return false;
  if (a.kind == NodeKind::Pow && a.exponent != b.exponent) return false;
  if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs)) return false;
  if (static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs)) return false;
  if (a.lhs && !structurally_equal(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !structurally_equal(*a.rhs, *b.rhs)) return false;
  return true;
}

}  // namespace tz::expr
