#include "tz/expr.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

using namespace tz;
using namespace tz::expr;

namespace {

ErrorKind kind_of(const std::function<void()>& f, std::size_t* offset = nullptr) {
  try {
    f();
  } catch (const ExprError& e) {
    if (offset) *offset = e.offset();
    return e.kind();
  }
  ADD_FAILURE() << "no ExprError thrown";
  return ErrorKind::InvalidArgument;
}

// Random formulas that are defined and moderately sized on [-1, 1]².
std::string random_formula(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 11);
  std::uniform_real_distribution<double> c(-2, 2);
  auto sub = [&] { return random_formula(rng, depth - 1); };
  switch (pick(rng)) {
    case 0: return "u";
    case 1: return "v";
    case 2: return std::to_string(c(rng));
    case 3: return "(" + sub() + " + " + sub() + ")";
    case 4: return "(" + sub() + " - " + sub() + ")";
    case 5: return "(" + sub() + " * " + sub() + ")";
    case 6: return "(" + sub() + ") / (2 + cos(" + sub() + "))";
    case 7: return "sin(" + sub() + ")";
    case 8: return "cos(" + sub() + ")";
    case 9: return "exp(sin(" + sub() + "))";
    case 10: return "sqrt(1 + (" + sub() + ")^2)";
    default: return "-(" + sub() + ")^" + std::to_string(std::uniform_int_distribution<int>(-1, 3)(rng)) + " * 0 + " + sub();
  }
}

}  // namespace

TEST(Parse, Precedence) {
  EXPECT_TRUE(structurally_equal(parse("u + v*v"), parse("u + (v*v)")));
  EXPECT_FALSE(structurally_equal(parse("u + v*v"), parse("(u + v)*v")));
  EXPECT_TRUE(structurally_equal(parse("u - v - 1"), parse("(u - v) - 1")));
  EXPECT_TRUE(structurally_equal(parse("u / v * 2"), parse("(u / v) * 2")));
  // ^ binds tighter than unary minus
  EXPECT_TRUE(structurally_equal(parse("-u^2"), parse("-(u^2)")));
  EXPECT_DOUBLE_EQ(parse("-u^2").eval(3, 0), -9.0);
  EXPECT_TRUE(structurally_equal(parse("  u\t+\nv "), parse("u+v")));
}

TEST(Parse, SimpleEvaluation) {
  EXPECT_EQ(parse("cos(u)*sin(v)").eval(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(parse("2*pi").eval(0, 0), 2 * std::numbers::pi);
  EXPECT_DOUBLE_EQ(parse("1.5e2 + .5").eval(0, 0), 150.5);
  EXPECT_DOUBLE_EQ(parse("u^-2").eval(2, 0), 0.25);
  EXPECT_DOUBLE_EQ(parse("u^0").eval(5, 0), 1.0);
}

TEST(Parse, SyntaxErrors) {
  std::size_t off = 0;
  EXPECT_EQ(kind_of([] { parse("u + "); }, &off), ErrorKind::SyntaxError);
  EXPECT_EQ(off, 4u);
  EXPECT_EQ(kind_of([] { parse("(u + v"); }, &off), ErrorKind::SyntaxError);
  EXPECT_EQ(off, 6u);
  EXPECT_EQ(kind_of([] { parse("u v"); }, &off), ErrorKind::SyntaxError);
  EXPECT_EQ(off, 2u);
  EXPECT_EQ(kind_of([] { parse("u ^ 1.5"); }), ErrorKind::SyntaxError);
  EXPECT_EQ(kind_of([] { parse("sin u"); }), ErrorKind::SyntaxError);
  EXPECT_EQ(kind_of([] { parse(""); }), ErrorKind::SyntaxError);
}

TEST(Parse, UnknownIdentifier) {
  std::size_t off = 0;
  EXPECT_EQ(kind_of([] { parse("u + w"); }, &off), ErrorKind::UnknownIdentifier);
  EXPECT_EQ(off, 4u);
  EXPECT_EQ(kind_of([] { parse("tan(u)"); }), ErrorKind::UnknownIdentifier);
}

TEST(Eval, DomainErrors) {
  std::size_t off = 0;
  const Expr d = parse("1 / (u - 1)");
  EXPECT_NO_THROW(d.eval(0, 0));
  EXPECT_EQ(kind_of([&] { d.eval(1, 0); }, &off), ErrorKind::DomainError);
  EXPECT_EQ(off, 2u);
  const Expr s = parse("v + sqrt(u)");
  EXPECT_EQ(kind_of([&] { s.eval(-1, 0); }, &off), ErrorKind::DomainError);
  EXPECT_EQ(off, 4u);
  EXPECT_EQ(kind_of([&] { parse("u^-1").eval(0, 1); }), ErrorKind::DomainError);
}

TEST(Eval, JetExamples) {
  const Jet2 a = parse("u^2").eval_jet2(3, 0);
  EXPECT_DOUBLE_EQ(a.value, 9);
  EXPECT_DOUBLE_EQ(a.du, 6);
  EXPECT_DOUBLE_EQ(a.duu, 2);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> U(-3, 3);
  const Expr uv = parse("u*v");
  for (int t = 0; t < 10; ++t) {
    const Jet2 j = uv.eval_jet2(U(rng), U(rng));
    EXPECT_EQ(j.duv, 1.0);
    EXPECT_EQ(j.duu, 0.0);
    EXPECT_EQ(j.dvv, 0.0);
  }
}

TEST(Eval, RandomTreesMatchFiniteDifferences) {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> U(-1, 1);
  const double h = 1e-4;
  for (int t = 0; t < 100; ++t) {
    const std::string src = random_formula(rng, 4);
    const Expr e = parse(src);
    const double u = U(rng), v = U(rng);
    const Jet2 j = e.eval_jet2(u, v);
    auto f = [&](double a, double b) { return e.eval(a, b); };
    const double fu = (f(u + h, v) - f(u - h, v)) / (2 * h);
    const double fv = (f(u, v + h) - f(u, v - h)) / (2 * h);
    const double fuu = (f(u + h, v) - 2 * f(u, v) + f(u - h, v)) / (h * h);
    const double fvv = (f(u, v + h) - 2 * f(u, v) + f(u, v - h)) / (h * h);
    const double fuv = (f(u + h, v + h) - f(u + h, v - h) - f(u - h, v + h) + f(u - h, v - h)) / (4 * h * h);
    const double scale = std::max(1.0, std::abs(j.value));
    EXPECT_NEAR(j.du, fu, 1e-5 * scale) << src;
    EXPECT_NEAR(j.dv, fv, 1e-5 * scale) << src;
    EXPECT_NEAR(j.duu, fuu, 1e-5 * scale) << src;
    EXPECT_NEAR(j.duv, fuv, 1e-5 * scale) << src;
    EXPECT_NEAR(j.dvv, fvv, 1e-5 * scale) << src;
  }
}

TEST(Eval, LinearityAndChainRule) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int t = 0; t < 30; ++t) {
    const std::string a = random_formula(rng, 3), b = random_formula(rng, 3);
    const double u = U(rng), v = U(rng);
    const Jet2 ja = parse(a).eval_jet2(u, v), jb = parse(b).eval_jet2(u, v);
    const Jet2 sum = parse("(" + a + ") + (" + b + ")").eval_jet2(u, v);
    const Jet2 ref = ja + jb;
    for (auto m : {&Jet2::value, &Jet2::du, &Jet2::dv, &Jet2::duu, &Jet2::duv, &Jet2::dvv})
      EXPECT_NEAR(sum.*m, ref.*m, 1e-12 * (1 + std::abs(ref.*m)));
    const Jet2 s = parse("sin(" + a + ")").eval_jet2(u, v);
    const Jet2 c = compose(ja, std::sin(ja.value), std::cos(ja.value), -std::sin(ja.value));
    EXPECT_NEAR(s.duu, ja.duu * std::cos(ja.value) - ja.du * ja.du * std::sin(ja.value), 1e-12 * (1 + std::abs(c.duu)));
    for (auto m : {&Jet2::value, &Jet2::du, &Jet2::dv, &Jet2::duu, &Jet2::duv, &Jet2::dvv})
      EXPECT_NEAR(s.*m, c.*m, 1e-12 * (1 + std::abs(c.*m)));
  }
}

TEST(Print, RoundTrip) {
  std::mt19937 rng(99);
  for (int t = 0; t < 100; ++t) {
    const Expr e = parse(random_formula(rng, 5));
    const Expr back = parse(e.to_string());
    EXPECT_TRUE(structurally_equal(e, back)) << e.to_string();
    EXPECT_EQ(back.to_string(), e.to_string());
  }
  for (const char* s : {"-u^2", "(-u)^2", "u^-3", "-(-u)", "1e-300 * u", "0.1 + 0.2"}) {
    const Expr e = parse(s);
    EXPECT_TRUE(structurally_equal(e, parse(e.to_string()))) << s << " -> " << e.to_string();
  }
}
