#include <doctest.h>

#include <cmath>
#include <numbers>

#include "knotbend/expression.hpp"
#include "oracle.hpp"

using namespace knotbend;
namespace ke = knotbend::expr;

namespace {

// Golden corpus: source -> expected tree (S-expression form). Covers every
// operator, function, precedence and associativity rule of the grammar.
struct GoldenCase {
    const char* source;
    const char* sexpr;
};

const GoldenCase kGolden[] = {
    {"sin(u)+2*cos(2*u)", "(+ (sin u) (* 2 (cos (* 2 u))))"},
    {"u", "u"},
    {"pi", "pi"},
    {"e", "e"},
    {"42", "42"},
    {"3.5e-2", "0.035"},
    {"-u", "(neg u)"},
    {"2+3*4", "(+ 2 (* 3 4))"},
    {"(2+3)*4", "(* (+ 2 3) 4)"},
    {"2*3+4", "(+ (* 2 3) 4)"},
    {"2-3-4", "(- (- 2 3) 4)"},
    {"2/3/4", "(/ (/ 2 3) 4)"},
    {"2^3^2", "(^ 2 (^ 3 2))"},
    {"-2^2", "(neg (^ 2 2))"},
    {"2^-3", "(^ 2 (neg 3))"},
    {"cos(u)^2", "(^ (cos u) 2)"},
    {"sqrt(abs(u))", "(sqrt (abs u))"},
    {"exp(-u^2)", "(exp (neg (^ u 2)))"},
    {"log(u+e)", "(log (+ u e))"},
    {"tan(u/2)", "(tan (/ u 2))"},
    {"1/(1+u^2)", "(/ 1 (+ 1 (^ u 2)))"},
    {"u*u*u", "(* (* u u) u)"},
    {"-(u+1)", "(neg (+ u 1))"},
    {"--u", "(neg (neg u))"},
    {"2*pi", "(* 2 pi)"},
    {"sin(cos(sin(u)))", "(sin (cos (sin u)))"},
    {"(u)", "u"},
    {"1e3", "1000"},
    {"u^2*sin(3*u)", "(* (^ u 2) (sin (* 3 u)))"},
    {"abs(u-1)+sqrt(u+2)", "(+ (abs (- u 1)) (sqrt (+ u 2)))"},
};

double fd_of(const ke::Expression& e, double u, double h = 1e-5) {
    return (ke::evaluate(e, u + h) - ke::evaluate(e, u - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("golden corpus parses to the expected trees") {
    for (const auto& g : kGolden) {
        CAPTURE(g.source);
        CHECK(ke::to_sexpr(ke::parse(g.source)) == g.sexpr);
    }
}

TEST_CASE("trivial evaluations") {
    CHECK(ke::evaluate(ke::parse("sin(u)"), 0.0) == 0.0);
    CHECK(ke::evaluate(ke::parse("pi"), 0.0) == doctest::Approx(3.141592653589793).epsilon(1e-15));
    CHECK(ke::evaluate(ke::parse("sin(u)+2*cos(2*u)"), 0.0) == doctest::Approx(2.0));
    CHECK(ke::evaluate(ke::parse("e"), 0.0) == doctest::Approx(std::numbers::e).epsilon(1e-15));
    CHECK(ke::evaluate(ke::parse("2^3^2"), 0.0) == 512.0);
    CHECK(ke::evaluate(ke::parse("-2^2"), 0.0) == -4.0);
}

TEST_CASE("parse errors carry offsets") {
    auto offset_of = [](const char* src) {
        try {
            ke::parse(src);
        } catch (const ke::ParseError& err) {
            return err.offset();
        }
        return std::size_t(9999);
    };
    CHECK(offset_of("2*") == 2);
    CHECK(offset_of("sin(u") == 5);
    CHECK(offset_of("sin u") == 4);
    CHECK(offset_of("foo(u)") == 0);
    CHECK(offset_of("u + y") == 4);
    CHECK(offset_of("1 + 2)") == 5);
    CHECK(offset_of("sin(u,1)") == 5);
    CHECK_THROWS_AS(ke::parse(""), ke::ParseError);
    CHECK_THROWS_AS(ke::parse("2 3"), ke::ParseError);
}

TEST_CASE("derivatives match finite differences on the corpus") {
    for (const auto& g : kGolden) {
        CAPTURE(g.source);
        const ke::Expression e = ke::parse(g.source);
        const ke::Expression d = ke::differentiate(e);
        for (double u : oracle::random_points(0.1, 2.9, 50, 42)) {
            double fd, an;
            try {
                fd = fd_of(e, u);
                an = ke::evaluate(d, u);
            } catch (const ke::EvalError&) {
                continue;  // outside the expression's domain (abs kink etc.)
            }
            CHECK(std::abs(an - fd) <= 1e-6 * (1.0 + std::abs(fd)));
        }
    }
}

TEST_CASE("second and third derivatives match FD of lower orders") {
    const char* sources[] = {"sin(2*u)", "exp(-u^2)", "u^3+cos(u)", "1/(1+u^2)", "sqrt(u+2)"};
    for (const char* src : sources) {
        CAPTURE(src);
        const ke::Expression e = ke::parse(src);
        const ke::Expression d1 = ke::differentiate(e);
        const ke::Expression d2 = ke::differentiate(d1);
        const ke::Expression d3 = ke::differentiate(d2);
        for (double u : oracle::random_points(0.2, 2.5, 25, 7)) {
            CHECK(std::abs(ke::evaluate(d2, u) - fd_of(d1, u)) <=
                  1e-6 * (1.0 + std::abs(fd_of(d1, u))));
            CHECK(std::abs(ke::evaluate(d3, u) - fd_of(d2, u)) <=
                  1e-6 * (1.0 + std::abs(fd_of(d2, u))));
        }
    }
}

TEST_CASE("specific derivative identities") {
    CHECK(ke::to_sexpr(ke::differentiate(ke::parse("u"))) == "1");
    CHECK(ke::to_sexpr(ke::differentiate(ke::parse("pi"))) == "0");
    const ke::Expression d = ke::differentiate(ke::parse("sin(2*u)"));
    const double fd = fd_of(ke::parse("sin(2*u)"), 0.7);
    CHECK(std::abs(ke::evaluate(d, 0.7) - fd) < 1e-8);
}

TEST_CASE("evaluation domain errors") {
    CHECK_THROWS_AS(ke::evaluate(ke::parse("log(u)"), -1.0), ke::EvalError);
    CHECK_THROWS_AS(ke::evaluate(ke::parse("log(u)"), 0.0), ke::EvalError);
    CHECK_THROWS_AS(ke::evaluate(ke::parse("sqrt(u)"), -0.5), ke::EvalError);
    CHECK_THROWS_AS(ke::evaluate(ke::parse("1/u"), 0.0), ke::EvalError);
    CHECK(ke::evaluate(ke::parse("abs(u)"), 0.0) == 0.0);
    // d|u|/du at 0 surfaces as a division by zero when evaluated.
    CHECK_THROWS_AS(ke::evaluate(ke::differentiate(ke::parse("abs(u)")), 0.0), ke::EvalError);
    try {
        ke::evaluate(ke::parse("1/(u-1)"), 1.0);
        CHECK(false);
    } catch (const ke::EvalError& err) {
        CHECK(err.offset() == 1);  // offset of the '/' node
    }
}

TEST_CASE("print round-trip preserves evaluation") {
    for (const auto& g : kGolden) {
        CAPTURE(g.source);
        const ke::Expression e = ke::parse(g.source);
        const ke::Expression reparsed = ke::parse(ke::to_string(e));
        for (double u : oracle::random_points(0.05, 2.95, 100, 1234)) {
            double a, b;
            try {
                a = ke::evaluate(e, u);
                b = ke::evaluate(reparsed, u);
            } catch (const ke::EvalError&) {
                continue;
            }
            CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)));
        }
    }
}

TEST_CASE("derivative trees also survive print round-trip") {
    for (const char* src : {"sin(2*u)", "u^2*sin(3*u)", "exp(-u^2)", "1/(1+u^2)"}) {
        const ke::Expression d = ke::differentiate(ke::parse(src));
        const ke::Expression reparsed = ke::parse(ke::to_string(d));
        for (double u : oracle::random_points(0.1, 2.9, 30, 5)) {
            CHECK(ke::evaluate(d, u) == doctest::Approx(ke::evaluate(reparsed, u)).epsilon(1e-12));
        }
    }
}

TEST_CASE("antiderivative table of cos is sin to 1e-10 at n=256") {
    const double period = 2.0 * std::numbers::pi;
    const auto table = ke::antiderivative_table(ke::parse("cos(u)"), period, 256, 0.0);
    REQUIRE(table.size() == 257);
    CHECK(table[0] == 0.0);
    double worst = 0.0;
    for (int i = 0; i <= 256; ++i)
        worst = std::max(worst, std::abs(table[i] - std::sin(period * i / 256)));
    CHECK(worst <= 1e-10);
}

TEST_CASE("antiderivative table trivial cases") {
    const auto zero = ke::antiderivative_table(ke::parse("0"), 1.0, 16, 2.5);
    for (double v : zero) CHECK(v == 2.5);
    const auto one = ke::antiderivative_table(ke::parse("1"), 1.0, 16, 0.0);
    for (int i = 0; i <= 16; ++i) CHECK(one[i] == doctest::Approx(i / 16.0).epsilon(1e-14));
}

TEST_CASE("antiderivative table rejects bad n") {
    CHECK_THROWS_AS(ke::antiderivative_table(ke::parse("u"), 1.0, 15, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ke::antiderivative_table(ke::parse("u"), 1.0, 17, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ke::antiderivative_table(ke::parse("u"), 1.0, 8, 0.0), std::invalid_argument);
}

TEST_CASE("antiderivative error decays at fourth order") {
    const double period = 2.0 * std::numbers::pi;
    auto max_err = [&](int n) {
        const auto table = ke::antiderivative_table(ke::parse("cos(u)"), period, n, 0.0);
        double worst = 0.0;
        for (int i = 0; i <= n; ++i)
            worst = std::max(worst, std::abs(table[i] - std::sin(period * i / n)));
        return worst;
    };
    const double e16 = max_err(16);
    const double e32 = max_err(32);
    const double e64 = max_err(64);
    CHECK(e16 / e32 > 12.0);  // ~16 for a fourth-order rule
    CHECK(e32 / e64 > 12.0);
}

TEST_CASE("jet evaluation agrees with repeated symbolic differentiation") {
    for (const char* src : {"sin(2*u)", "u^2*sin(3*u)", "exp(-u^2)", "1/(1+u^2)", "sqrt(u+2)",
                            "tan(u/2)", "2^u"}) {
        CAPTURE(src);
        ke::Expression e = ke::parse(src);
        ke::Expression d = e;
        for (double u : oracle::random_points(0.2, 2.0, 10, 99)) {
            const Jet j = ke::evaluate_jet(e, u, 5);
            d = e;
            for (int k = 0; k <= 5; ++k) {
                const double sym = ke::evaluate(d, u);
                CHECK(std::abs(j.derivative(k) - sym) <= 1e-9 * (1.0 + std::abs(sym)));
                d = ke::differentiate(d);
            }
        }
    }
}

TEST_CASE("constant folding keeps literal-only subtrees as numbers") {
    // Combinators fold literals; parse preserves the written tree.
    const ke::Expression two = ke::number(2.0);
    const ke::Expression folded = two * ke::number(3.0) + ke::number(4.0);
    CHECK(ke::to_sexpr(folded) == "10");
    CHECK(ke::to_sexpr(ke::parse("2*3+4")) == "(+ (* 2 3) 4)");
    const ke::Expression zero = ke::number(0.0) * ke::var_u();
    CHECK(ke::to_sexpr(zero) == "0");
}
