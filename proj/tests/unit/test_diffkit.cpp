#include <gtest/gtest.h>

#include <cmath>

#include "composites.hpp"
#include "oracles.hpp"
#include "scalred/diffkit.hpp"
#include "scalred/expression.hpp"

using namespace scalred;
using oracle::vec;

namespace {

ScalarField parse_field(const std::string& src, const std::vector<std::string>& vars) {
  return to_field(Expression::parse(src, vars));
}

HyperDual random_dual(std::uint64_t& s) {
  auto u = [&s] { return 2.0 * uniform01(s) - 1.0; };
  return {u(), u(), u(), u()};
}

void expect_dual_near(const HyperDual& a, const HyperDual& b, double tol) {
  EXPECT_NEAR(a.re, b.re, tol);
  EXPECT_NEAR(a.e1, b.e1, tol);
  EXPECT_NEAR(a.e2, b.e2, tol);
  EXPECT_NEAR(a.e12, b.e12, tol);
}

}  // namespace

TEST(HyperDual, TruncatedAlgebraUnits) {
  const HyperDual e1{0.0, 1.0, 0.0, 0.0};
  const HyperDual e2{0.0, 0.0, 1.0, 0.0};
  const HyperDual p11 = e1 * e1;
  const HyperDual p12 = e1 * e2;
  EXPECT_EQ(p11.re, 0.0);
  EXPECT_EQ(p11.e1, 0.0);
  EXPECT_EQ(p11.e12, 0.0);
  EXPECT_EQ((e2 * e2).e12, 0.0);
  EXPECT_EQ(p12.e12, 1.0);
  const HyperDual e12{0.0, 0.0, 0.0, 1.0};
  EXPECT_EQ((e12 * e1).e12, 0.0);
  EXPECT_EQ((e12 * e12).e12, 0.0);
}

TEST(HyperDual, AssociativeAndDistributiveOnRandomInputs) {
  std::uint64_t s = 42;
  for (int i = 0; i < 200; ++i) {
    const auto a = random_dual(s), b = random_dual(s), c = random_dual(s);
    expect_dual_near((a * b) * c, a * (b * c), 1e-15);
    expect_dual_near(a * (b + c), a * b + a * c, 1e-15);
    expect_dual_near(a * b, b * a, 1e-15);
  }
}

TEST(HyperDual, SeededDirectionGivesQuadraticForm) {
  // f(u, v) = u^2 v + 3 v^3, H = [[2v, 2u], [2u, 18v]].
  const auto f = parse_field("u^2*v + 3*v^3", {"u", "v"});
  const Vec x = vec({0.7, -1.3});
  const Vec d = vec({0.4, 2.0});
  std::vector<HyperDual> in(2);
  for (int i = 0; i < 2; ++i) in[i] = HyperDual{x[i], d[i], d[i], 0.0};
  const HyperDual out = f(std::span<const HyperDual>(in));
  Mat H(2, 2);
  H << 2 * x[1], 2 * x[0], 2 * x[0], 18 * x[1];
  EXPECT_NEAR(out.e12, d.dot(H * d), 1e-13);
}

TEST(ScalarField, ZeroSeedsReproduceRealEvaluation) {
  const auto f = parse_field("exp(a)*sin(b) + atan(a*b)", {"a", "b"});
  const std::vector<HyperDual> in{HyperDual(0.3), HyperDual(1.1)};
  const std::vector<double> re{0.3, 1.1};
  const auto out = f(std::span<const HyperDual>(in));
  EXPECT_EQ(out.re, f(std::span<const double>(re)));
  EXPECT_EQ(out.e1, 0.0);
  EXPECT_EQ(out.e12, 0.0);
}

TEST(Gradient, Examples) {
  EXPECT_DOUBLE_EQ(gradient(parse_field("u^2", {"u"}), vec({3}))[0], 6.0);

  const auto at = parse_field("atan(b/a)", {"a", "b"});
  const Vec g = gradient(at, vec({1, 1}));
  EXPECT_NEAR(g[0], -0.5, 1e-15);
  EXPECT_NEAR(g[1], 0.5, 1e-15);
  const Vec fd = oracle::fd_gradient(oracle::real(at), vec({1, 1}), 1e-6);
  EXPECT_LT((g - fd).cwiseAbs().maxCoeff(), 1e-8);

  const Vec z = gradient(parse_field("7", {"a", "b", "c"}), vec({0.1, -4, 9}));
  EXPECT_EQ(z, Vec::Zero(3));
}

TEST(Gradient, ArityMismatchIsDimensionError) {
  EXPECT_THROW(gradient(parse_field("u^2", {"u"}), vec({1, 2})), DimensionError);
}

TEST(Gradient, NonFiniteOutputNamesCoordinate) {
  const auto f = ScalarField::generic(2, []<class T>(std::span<const T> x) { return x[0] * 1e308 * 1e308 + x[1]; });
  try {
    gradient(f, vec({1.0, 1.0}));
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("coordinate 0"), std::string::npos) << e.what();
  }
}

TEST(Gradient, DomainGuardsRaiseNumericError) {
  EXPECT_THROW(gradient(parse_field("log(u)", {"u"}), vec({-1})), NumericError);
  EXPECT_THROW(gradient(parse_field("sqrt(u)", {"u"}), vec({-1})), NumericError);
  EXPECT_THROW(gradient(parse_field("1/u", {"u"}), vec({0})), NumericError);
  EXPECT_THROW(parse_field("log(u)", {"u"})(vec({0})), NumericError);
}

TEST(Gradient, IsLinearInTheField) {
  const auto f = parse_field("sin(a)*b^2", {"a", "b"});
  const auto g = parse_field("exp(a - b)", {"a", "b"});
  const auto fg = parse_field("sin(a)*b^2 + exp(a - b)", {"a", "b"});
  std::uint64_t s = 9;
  for (int i = 0; i < 50; ++i) {
    const Vec x = vec({2 * uniform01(s) - 1, 2 * uniform01(s) - 1});
    const Vec lhs = gradient(fg, x);
    const Vec rhs = gradient(f, x) + gradient(g, x);
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Hessian, Examples) {
  const auto uv = hessian(parse_field("u*v", {"u", "v"}), vec({2, 5}));
  Mat expect(2, 2);
  expect << 0, 1, 1, 0;
  EXPECT_EQ(uv.matrix, expect);

  EXPECT_DOUBLE_EQ(hessian(parse_field("u^3", {"u"}), vec({2})).matrix(0, 0), 12.0);

  const auto q = hessian(parse_field("(a^2 + b^2)/2", {"a", "b"}), vec({-0.3, 8.0}));
  EXPECT_EQ(q.matrix, Mat::Identity(2, 2));
  EXPECT_FALSE(q.asymmetric());
}

TEST(Hessian, ExactlySymmetricAfterSymmetrization) {
  composites::Generator gen(5);
  for (int i = 0; i < 20; ++i) {
    const auto f = parse_field(gen.expression(), composites::variables());
    const Vec x = vec({gen.uniform(-1, 1), gen.uniform(-1, 1), gen.uniform(-1, 1)});
    const Mat H = hessian(f, x).matrix;
    EXPECT_TRUE((H - H.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST(Hessian, ExpandAgreesWithSeparateCalls) {
  const auto f = parse_field("exp(a)*cos(b) + a*b^3", {"a", "b"});
  const Vec x = vec({0.2, -0.7});
  const auto e = expand(f, x);
  EXPECT_DOUBLE_EQ(e.value, f(x));
  EXPECT_EQ(e.gradient, gradient(f, x));
  EXPECT_EQ(e.hessian.matrix, hessian(f, x).matrix);
}

TEST(Jacobian, Examples) {
  const auto lin = to_field(std::vector<Expression>{Expression::parse("a + b", {"a", "b"}),
                                                    Expression::parse("a - b", {"a", "b"})});
  Mat expect(2, 2);
  expect << 1, 1, 1, -1;
  EXPECT_EQ(jacobian(lin, vec({3, -2})), expect);

  const auto unit = to_field(std::vector<Expression>{Expression::parse("a/sqrt(a^2 + b^2)", {"a", "b"}),
                                                     Expression::parse("b/sqrt(a^2 + b^2)", {"a", "b"})});
  const Mat J = jacobian(unit, vec({1, 0}));
  const Mat fd = oracle::fd_jacobian([&](const Vec& x) { return unit(x); }, vec({1, 0}));
  EXPECT_LT((J - fd).cwiseAbs().maxCoeff(), 1e-8);
  Mat expect2(2, 2);
  expect2 << 0, 0, 0, 1;
  EXPECT_LT((J - expect2).cwiseAbs().maxCoeff(), 1e-15);

  const auto id = to_field(std::vector<Expression>{Expression::parse("a", {"a", "b"}),
                                                   Expression::parse("b", {"a", "b"})});
  EXPECT_EQ(jacobian(id, vec({4, 5})), Mat::Identity(2, 2));
}

TEST(Jacobian, JvpMatchesJacobianTimesDirection) {
  const auto m = to_field(std::vector<Expression>{Expression::parse("sin(a)*b", {"a", "b"}),
                                                  Expression::parse("exp(a*b)", {"a", "b"}),
                                                  Expression::parse("atan2(b, a)", {"a", "b"})});
  const Vec x = vec({0.4, 0.9}), d = vec({-1.2, 0.3});
  EXPECT_LT((jvp(m, x, d) - jacobian(m, x) * d).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Composites, GradientAndHessianMatchFiniteDifferences) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    composites::Generator gen(seed);
    const std::string src = gen.expression();
    const auto f = parse_field(src, composites::variables());
    const Vec x = vec({gen.uniform(-1, 1), gen.uniform(-1, 1), gen.uniform(-1, 1)});
    const auto e = expand(f, x);
    const Vec fg = oracle::fd_gradient(oracle::real(f), x, 1e-5);
    const Mat fh = oracle::fd_hessian(oracle::real(f), x, 1e-4);
    EXPECT_LT(oracle::rel_err(e.gradient, fg), 1e-6) << src;
    EXPECT_LT(oracle::rel_err(e.hessian.matrix, fh), 1e-6) << src;
  }
}

TEST(NestedDual, ThirdDerivativeOfCube) {
  // Inner direction differentiates once more: d/dx of (x^3)'' = 6.
  const auto f = parse_field("u^3", {"u"});
  ASSERT_TRUE(f.supports_nested());
  const double x = 1.7;
  const HyperDual inner{x, 1.0, 0.0, 0.0};
  const std::vector<NestedDual> in{NestedDual{inner, HyperDual(1.0), HyperDual(1.0), HyperDual(0.0)}};
  const NestedDual out = f(std::span<const NestedDual>(in));
  EXPECT_DOUBLE_EQ(out.e12.re, 6 * x);
  EXPECT_DOUBLE_EQ(out.e12.e1, 6.0);
}
