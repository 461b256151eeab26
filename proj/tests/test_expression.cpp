#include "complag/algebra.hpp"
#include "complag/error.hpp"
#include "complag/evaluate.hpp"
#include "complag/generate.hpp"
#include "complag/parser.hpp"

#include <doctest.h>

#include <random>

using namespace complag;

namespace {

Expression P(const char* text) { return simplify(parse_expr(text)); }

Expression sym(const char* name) { return Expression(Symbol::parameter(name)); }

// Evaluation is allowed to fail at a point (division by zero, ln 0); both
// sides must then fail together or the sample is skipped.
bool try_eval(const Expression& e, const Point& p, Complex& out) {
    try {
        out = eval(e, p);
        return std::isfinite(out.real()) && std::isfinite(out.imag());
    } catch (const Error&) {
        return false;
    }
}

}  // namespace

TEST_CASE("exact rational constants") {
    ComplexRational a(Rational(1, 3), Rational(2));
    ComplexRational b = ComplexRational::fraction(2, 3);
    CHECK((a + b) == ComplexRational(Rational(1), Rational(2)));
    CHECK((a * a) == ComplexRational(Rational(1, 9) - 4, Rational(4, 3)));
    CHECK((a / a).is_one());
    CHECK_THROWS_AS(a / ComplexRational(0), DivisionByZero);
    CHECK(ipow(ComplexRational::i(), 4).is_one());
    CHECK(ipow(ComplexRational(2), -3) == ComplexRational::fraction(1, 8));
    CHECK_THROWS_AS(ipow(ComplexRational(0), -1), DivisionByZero);
}

TEST_CASE("simplify collects terms and factors") {
    CHECK(P("x1 + x1") == P("2*x1"));
    CHECK(P("z1*z1*z1") == P("z1^3"));
    CHECK(P("z1 - z1").is_zero());
    CHECK(P("z1/z1").is_one());
    CHECK(P("I*I") == Expression::integer(-1));
    CHECK(P("1/2 + 1/3") == Expression::fraction(5, 6));
    CHECK(P("0.25") == Expression::fraction(1, 4));
    CHECK(P("sqrt(z1)") == pow(Expression(z(1)), Expression::fraction(1, 2)));
    CHECK(P("-(-z1)") == Expression(z(1)));
    CHECK(P("z1^0").is_one());
    CHECK(P("0*sin(z1)").is_zero());
    CHECK(P("m*z1 + z1*m") == P("2*m*z1"));
    CHECK(P("conj(z1*I)") == P("-I*zb1"));
    CHECK(P("conj(m)") == sym("m"));
    CHECK(is_canonical_kind_set(P("conj(z1)/(1 - zb1) - sqrt(z1)")));
    CHECK_THROWS_AS(P("1/(z1 - z1)"), DivisionByZero);
    CHECK(P("-(z1 - zb1) + 2*zb1") == P("3*zb1 - z1"));
    CHECK(P("(zb1 - z1)*(z1 - zb1)") == P("-(z1 - zb1)^2"));
    CHECK(P("(zb1 - z1)^3") == P("-(z1 - zb1)^3"));
    CHECK(P("sqrt(zb1 - z1)") != P("sqrt(z1 - zb1)"));
}

TEST_CASE("simplify is idempotent on random trees") {
    std::mt19937_64 rng(1);
    for (int k = 0; k < 1000; ++k) {
        Expression s = random_canonical_expression(rng);
        REQUIRE_MESSAGE(simplify(s) == s, print_expr(s));
        CHECK(is_canonical_kind_set(s));
    }
}

TEST_CASE("conjugation is an involution on random trees") {
    std::mt19937_64 rng(2);
    for (int k = 0; k < 1000; ++k) {
        Expression s = random_canonical_expression(rng);
        REQUIRE_MESSAGE(conjugate(conjugate(s)) == s, print_expr(s));
    }
}

TEST_CASE("simplify preserves values") {
    std::mt19937_64 rng(3);
    SamplingDomain domain;
    int compared = 0;
    for (int k = 0; k < 200; ++k) {
        Expression e = random_expression(rng);
        Expression s;
        try {
            s = simplify(e);
        } catch (const DivisionByZero&) {
            continue;
        }
        for (int j = 0; j < 20; ++j) {
            Point p = domain.draw(rng, {"m", "g"});
            Complex a, b;
            if (!try_eval(e, p, a) || !try_eval(s, p, b)) continue;
            ++compared;
            REQUIRE_MESSAGE(relative_deviation(a, b) < 1e-9, print_expr(e) << " at " << format_point(p));
        }
    }
    CHECK(compared > 2000);
}

TEST_CASE("formal conjugation matches numeric conjugation on the real slice") {
    std::mt19937_64 rng(4);
    SamplingDomain domain;
    RandomTreeOptions opts;
    // Principal-branch sqrt commutes with conj away from the cut only.
    opts.half_powers = false;
    for (int k = 0; k < 200; ++k) {
        Expression s = random_canonical_expression(rng, opts);
        Expression c = conjugate(s);
        for (int j = 0; j < 5; ++j) {
            Point p = domain.draw(rng, {"m", "g"});
            Complex a, b;
            if (!try_eval(s, p, a) || !try_eval(c, p, b)) continue;
            REQUIRE_MESSAGE(relative_deviation(std::conj(a), b) < 1e-9, print_expr(s));
        }
    }
}

TEST_CASE("conjugation is a ring homomorphism") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 200; ++k) {
        Expression a = random_canonical_expression(rng);
        Expression b = random_canonical_expression(rng);
        CHECK(conjugate(a + b) == conjugate(a) + conjugate(b));
        CHECK(conjugate(a * b) == conjugate(a) * conjugate(b));
    }
}

TEST_CASE("substitution") {
    Binding b{{z(1), P("x1 + I*y1")}, {zbar(1), P("x1 - I*y1")}};
    CHECK(expand(substitute(P("z1*zb1"), b)) == P("x1^2 + y1^2"));
    CHECK(substitute(P("m*g"), {{Symbol::parameter("m"), P("2")}}) == P("2*g"));
    CHECK_THROWS_AS(substitute(P("g"), {{Symbol::parameter("g"), P("-g")}}), CyclicBinding);
    // Simultaneous, not sequential.
    CHECK(substitute(P("z1 + zb1"), {{z(1), P("zb1")}, {zbar(1), P("z1")}}) == P("z1 + zb1"));
}

TEST_CASE("expand") {
    CHECK(expand(P("(z1 + zb1)^2")) == P("z1^2 + 2*z1*zb1 + zb1^2"));
    CHECK(expand(P("(1 + I)*(1 - I)")) == Expression::integer(2));
    CHECK(expand(P("m*(z1 - zb1)*(z1 + zb1)")) == P("m*z1^2 - m*zb1^2"));
}

TEST_CASE("evaluation") {
    Point p{{z(1), {1.0, 2.0}}, {Symbol::parameter("m"), {3.0, 0.0}}};
    CHECK(eval(P("m*z1^2"), p) == Complex(-9.0, 12.0));
    CHECK(std::abs(eval(P("sqrt(-4)"), {}) - Complex(0.0, 2.0)) < 1e-15);
    // Principal branch on the negative real axis, whatever the sign of zero.
    CHECK(std::abs(eval(parse_expr("1/sqrt(-(5/3))"), {}) - Complex(0.0, -std::sqrt(0.6))) < 1e-15);
    CHECK(std::abs(eval(parse_expr("ln(-1)"), {}) - Complex(0.0, M_PI)) < 1e-15);
    CHECK_THROWS_AS(eval(P("zb1"), p), UnboundSymbol);
    CHECK_THROWS_AS(eval(P("1/(z1 - z1 + m - 3)"), p), DivisionByZero);
    CHECK_THROWS_AS(eval(P("ln(m - 3)"), p), DomainError);
}

TEST_CASE("randomized equality oracle") {
    SamplingDomain domain;
    auto same = equal_numeric(P("(z1 + zb1)^2"), P("z1^2 + 2*z1*zb1 + zb1^2"), 50, 1e-12, domain);
    CHECK(same.equal);
    CHECK(same.samples == 50);
    auto differ = equal_numeric(P("z1*zb1"), P("z1^2"), 50, 1e-9, domain);
    CHECK_FALSE(differ.equal);
    CHECK(differ.max_deviation > 1e-3);
    CHECK_FALSE(differ.argmax.empty());
    auto again = equal_numeric(P("z1*zb1"), P("z1^2"), 50, 1e-9, domain);
    CHECK(again.max_deviation == differ.max_deviation);
}
