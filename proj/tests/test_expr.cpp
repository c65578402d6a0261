#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "opennet/expr.hpp"
#include "opennet/sampling.hpp"
#include "oracles.hpp"

using opennet::SampleRng;
namespace expr = opennet::expr;

namespace {

double evalAt(const std::string& source, const std::vector<std::string>& vars,
              const std::map<std::string, double>& env) {
    return expr::parse(source, vars).eval(env);
}

}  // namespace

TEST_CASE("parsing respects precedence and associativity") {
    const std::vector<std::string> vars = {"x", "y"};
    const std::map<std::string, double> env = {{"x", 3.0}, {"y", 2.0}};
    CHECK(evalAt("x + y * 2", vars, env) == doctest::Approx(7.0));
    CHECK(evalAt("(x + y) * 2", vars, env) == doctest::Approx(10.0));
    CHECK(evalAt("x - y - 1", vars, env) == doctest::Approx(0.0));
    CHECK(evalAt("x / y / 2", vars, env) == doctest::Approx(0.75));
    CHECK(evalAt("2^3^2", {}, {}) == doctest::Approx(512.0));
    CHECK(evalAt("-x^2", vars, env) == doctest::Approx(-9.0));
    CHECK(evalAt("x^-1", vars, env) == doctest::Approx(1.0 / 3.0));
    CHECK(evalAt("2 * -x", vars, env) == doctest::Approx(-6.0));
}

TEST_CASE("dotted identifiers and function calls") {
    const std::vector<std::string> vars = {"n0.m", "e1.m"};
    const std::map<std::string, double> env = {{"n0.m", 0.5}, {"e1.m", 2.0}};
    CHECK(evalAt("sin(n0.m) + e1.m^3", vars, env) ==
          doctest::Approx(std::sin(0.5) + 8.0));
    CHECK(evalAt("exp(tanh(n0.m)) * sqrt(e1.m)", vars, env) ==
          doctest::Approx(std::exp(std::tanh(0.5)) * std::sqrt(2.0)));
    CHECK(evalAt("cos(0)", {}, {}) == doctest::Approx(1.0));
}

TEST_CASE("parse errors carry the failing offset") {
    CHECK_THROWS_AS(expr::parse("2 +", {}), expr::ParseError);
    CHECK_THROWS_AS(expr::parse("sin()", {}), expr::ParseError);
    CHECK_THROWS_AS(expr::parse("2 $ 3", {}), expr::ParseError);
    CHECK_THROWS_AS(expr::parse("q + 1", {"x"}), expr::ParseError);
    CHECK_THROWS_AS(expr::parse("log(1)", {}), expr::ParseError);
    try {
        expr::parse("2 + * 3", {});
        FAIL("expected a parse error");
    } catch (const expr::ParseError& error) {
        CHECK(error.offset() == 4);
    }
    try {
        expr::parse("x + yy", {"x", "y"});
        FAIL("expected a parse error");
    } catch (const expr::ParseError& error) {
        CHECK(error.offset() == 4);
    }
}

TEST_CASE("evaluation errors for domain problems and missing variables") {
    const std::vector<std::string> vars = {"x", "y"};
    const auto ratio = expr::parse("x / y", vars);
    CHECK_THROWS_AS(ratio.eval({{"x", 1.0}, {"y", 0.0}}), expr::EvalError);
    CHECK_THROWS_AS(ratio.eval({{"x", 1.0}}), expr::EvalError);
    CHECK_THROWS_AS(expr::parse("sqrt(x)", {"x"}).eval({{"x", -1.0}}), expr::EvalError);
}

TEST_CASE("substitution replaces whole variables") {
    const auto sum = expr::parse("x + y", {"x", "y"});
    const auto substituted = sum.substitute({{"x", expr::parse("u * v", {"u", "v"})}});
    CHECK(substituted.eval({{"u", 2.0}, {"v", 3.0}, {"y", 4.0}}) == doctest::Approx(10.0));
    // The replaced variable is gone; the untouched one stays.
    std::set<std::string> variables;
    substituted.collectVariables(variables);
    CHECK(variables == std::set<std::string>{"u", "v", "y"});
}

TEST_CASE("differentiation rules on closed forms") {
    const std::vector<std::string> vars = {"x"};
    const auto checkDerivative = [&](const std::string& f, const std::string& df, double at) {
        CAPTURE(f);
        const auto lhs = expr::parse(f, vars).differentiate("x");
        const auto rhs = expr::parse(df, vars);
        const std::map<std::string, double> env = {{"x", at}};
        CHECK(lhs.eval(env) == doctest::Approx(rhs.eval(env)).epsilon(1e-12));
    };
    checkDerivative("x * sin(x)", "sin(x) + x * cos(x)", 0.7);
    checkDerivative("x^3", "3 * x^2", 1.3);
    checkDerivative("tanh(x)", "1 - tanh(x)^2", 0.4);
    checkDerivative("exp(2 * x)", "2 * exp(2 * x)", 0.2);
    checkDerivative("sqrt(1 + x^2)", "x / sqrt(1 + x^2)", 0.9);
    checkDerivative("1 / x", "-1 / x^2", 0.5);
    checkDerivative("cos(x^2)", "-2 * x * sin(x^2)", 0.3);
}

TEST_CASE("derivative in an unused variable vanishes") {
    const auto e = expr::parse("x * sin(x)", {"x"});
    const auto d = e.differentiate("y");
    CHECK(d.isConstant());
    CHECK(d.constantValue() == 0.0);
}

TEST_CASE("variable-exponent powers are rejected by differentiation") {
    CHECK_THROWS_AS(expr::parse("x^x", {"x"}).differentiate("x"), expr::DiffError);
}

TEST_CASE("jacobian layout is rows of components by columns of variables") {
    const std::vector<std::string> vars = {"x", "y"};
    const auto rows = expr::jacobian({expr::parse("x * y", vars), expr::parse("x + y^2", vars)}, vars);
    REQUIRE(rows.size() == 2);
    REQUIRE(rows[0].size() == 2);
    const std::map<std::string, double> env = {{"x", 2.0}, {"y", 3.0}};
    CHECK(rows[0][0].eval(env) == doctest::Approx(3.0));
    CHECK(rows[0][1].eval(env) == doctest::Approx(2.0));
    CHECK(rows[1][0].eval(env) == doctest::Approx(1.0));
    CHECK(rows[1][1].eval(env) == doctest::Approx(6.0));
}

TEST_CASE("printed expressions reparse to the same function") {
    SampleRng rng(20240517);
    const std::vector<std::string> vars = {"x", "y"};
    const expr::VarTable table(vars);
    for (int i = 0; i < 50; ++i) {
        const auto original = oracles::randomBoundedExpression(rng, vars, 4);
        const auto reparsed = expr::parse(original.str(), vars);
        for (int probe = 0; probe < 5; ++probe) {
            const auto point = rng.boxPoint(2, -2.0, 2.0);
            CHECK(original.eval(table, point) == reparsed.eval(table, point));
        }
    }
}

TEST_CASE("table evaluation matches map evaluation") {
    const std::vector<std::string> vars = {"a", "b", "c"};
    const expr::VarTable table(vars);
    const auto e = expr::parse("a * tanh(b) - c^2", vars);
    const std::vector<double> point = {1.5, -0.25, 0.75};
    const std::map<std::string, double> env = {{"a", 1.5}, {"b", -0.25}, {"c", 0.75}};
    CHECK(e.eval(table, point) == e.eval(env));
    CHECK(table.indexOf("b") == 1);
    CHECK(table.indexOf("missing") == -1);
}

TEST_CASE("derivatives agree with central finite differences") {
    SampleRng rng(987654321);
    const std::vector<std::string> vars = {"x", "y", "z"};
    const expr::VarTable table(vars);
    int comparisons = 0;
    for (int i = 0; i < 100; ++i) {
        const auto e = oracles::randomBoundedExpression(rng, vars, 4);
        for (std::size_t j = 0; j < vars.size(); ++j) {
            const auto derivative = e.differentiate(vars[j]);
            const auto point = rng.boxPoint(3, -2.0, 2.0);
            const double analytic = derivative.eval(table, point);
            const double numeric = oracles::centralDifference(
                [&](const std::vector<double>& p) { return e.eval(table, p); }, point, j, 1e-6);
            CAPTURE(e.str());
            CHECK(std::abs(analytic - numeric) <= 1e-5 * (1.0 + std::abs(analytic)));
            ++comparisons;
        }
    }
    CHECK(comparisons == 300);
}
