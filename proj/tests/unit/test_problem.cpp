#include <gtest/gtest.h>

#include <cmath>

#include "exitrate/error.hpp"
#include "exitrate/expression.hpp"
#include "exitrate/problem.hpp"

using namespace exitrate;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an exitrate::Error";
  return ErrorCode::kIo;
}

ProblemSpec with_sigma(ProblemSpec p, SigmaFn sigma) {
  p.sigma = std::move(sigma);
  return p;
}

}  // namespace

TEST(Expression, PrecedenceAndFunctions) {
  EXPECT_DOUBLE_EQ(Expression::parse("1 + 2 * 3").evaluate({0, 0}), 7.0);
  EXPECT_DOUBLE_EQ(Expression::parse("-x^2").evaluate({3, 0}), -9.0);
  EXPECT_DOUBLE_EQ(Expression::parse("2^3^2").evaluate({0, 0}), 512.0);
  EXPECT_NEAR(Expression::parse("sin(pi * x1) + y").evaluate({0.5, 2}), 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(Expression::parse("c * x", {{"c", 4}}).evaluate({0.25, 0}), 1.0);
}

TEST(Expression, RejectsMalformedInput) {
  EXPECT_EQ(code_of([] { Expression::parse("1 +"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { Expression::parse("foo(x)"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { Expression::parse("q"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { Expression::parse("(x"); }), ErrorCode::kParse);
}

TEST(Validation, ConstantCoefficientIsAccepted) {
  const ValidatedProblem p = validate_problem(bm_interval());
  EXPECT_DOUBLE_EQ(p.sampled_floor(), 1.0);
}

TEST(Validation, DegenerateDiffusionIsRejected) {
  auto spec = with_sigma(bm_interval(), [](const Point& x) { return Vec2{x[0] < 0.5 ? 1.0 : 0.0, 0.0}; });
  EXPECT_EQ(code_of([&] { validate_problem(spec); }), ErrorCode::kEllipticityViolation);
}

TEST(Validation, NonFiniteCoefficientIsRejected) {
  ProblemSpec spec = bm_interval();
  spec.drift = [](const Point& x, std::size_t) { return Vec2{1.0 / (x[0] - 0.5), 0.0}; };
  EXPECT_EQ(code_of([&] { validate_problem(spec); }), ErrorCode::kNonFiniteCoefficient);
}

TEST(Validation, AnisotropicSquareFromJson) {
  const char* text = R"({"name":"aniso","dim":2,"bounds":[[0,1],[0,1]],"actions":["a"],
    "drift":[["0","0"]],"sigma":["1","1 + x1"],"c0":1})";
  const ValidatedProblem p = validate_problem(problem_from_json(text));
  EXPECT_DOUBLE_EQ(p.sampled_floor(), 1.0);
  EXPECT_DOUBLE_EQ(p.sigma({0.5, 0.25})[1], 1.5);
}

TEST(Validation, IsIdempotent) {
  const ValidatedProblem once = validate_problem(bang_bang());
  const ValidatedProblem twice = validate_problem(once);
  EXPECT_EQ(once.sampled_floor(), twice.sampled_floor());
  EXPECT_EQ(once.lipschitz_estimate(), twice.lipschitz_estimate());
  EXPECT_EQ(once.name(), twice.name());
}

TEST(Validation, EveryCatalogProblemIsAccepted) {
  const auto catalog = builtin_catalog();
  EXPECT_EQ(catalog.size(), 4u);
  for (const auto& entry : catalog) EXPECT_NO_THROW(validate_problem(entry.spec)) << entry.name;
}

TEST(Problem, JsonRoundTrip) {
  const ProblemSpec original = drift_interval(1.5);
  const ValidatedProblem back = validate_problem(problem_from_json(problem_to_json(original)));
  EXPECT_EQ(back.name(), "drift-interval");
  EXPECT_DOUBLE_EQ(back.drift({0.3, 0}, 0)[0], 1.5);
  EXPECT_DOUBLE_EQ(back.sigma({0.3, 0})[0], 1.0);
}

TEST(Problem, MalformedJsonIsAParseError) {
  EXPECT_EQ(code_of([] { problem_from_json("{"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { problem_from_json(R"({"dim":1})"); }), ErrorCode::kParse);
}

TEST(Problem, ResolveWithParameters) {
  const ValidatedProblem p = validate_problem(resolve_problem("drift-interval:c=2"));
  EXPECT_DOUBLE_EQ(p.drift({0.5, 0}, 0)[0], 2.0);
  EXPECT_EQ(code_of([] { resolve_problem("drift-interval:c"); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { resolve_problem("/no/such/file.json"); }), ErrorCode::kIo);
}

TEST(Problem, PolicyChecks) {
  EXPECT_NO_THROW(check_policy(PolicySpec::uniform(3, 1), 3, 2));
  EXPECT_EQ(code_of([] { check_policy(PolicySpec::uniform(3, 2), 3, 2); }),
            ErrorCode::kInvalidPolicy);
  EXPECT_EQ(code_of([] { check_policy(PolicySpec::uniform(2, 0), 3, 2); }),
            ErrorCode::kInvalidPolicy);
}
