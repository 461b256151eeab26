#include "complag/calculus.hpp"
#include "complag/error.hpp"
#include "complag/generate.hpp"
#include "complag/parser.hpp"

#include <doctest.h>

#include <random>

using namespace complag;

namespace {

Expression P(const char* text) { return simplify(parse_expr(text)); }

const Symbol kVars[] = {z(1), zbar(1), zdot(1), zbardot(1)};

// Random trees without half powers or conj stay smooth at generic points.
RandomTreeOptions smooth_options() {
    RandomTreeOptions o;
    o.half_powers = false;
    return o;
}

}  // namespace

TEST_CASE("Wirtinger partials treat z and zb as independent") {
    CHECK(partial(P("z1*zb1"), z(1)) == P("zb1"));
    CHECK(partial(P("z1*zb1"), zbar(1)) == P("z1"));
    CHECK(partial(P("zb1^3"), z(1)).is_zero());
    CHECK(partial(P("sqrt(z1*zb1)"), z(1)) == P("1/2*zb1/sqrt(z1*zb1)"));
    CHECK(partial(P("sin(m*z1)"), z(1)) == P("m*cos(m*z1)"));
    CHECK(partial(P("exp(I*zb1)"), zbar(1)) == P("I*exp(I*zb1)"));
    CHECK(partial(P("ln(z1)"), z(1)) == P("1/z1"));
    CHECK(partial(P("z1^m"), z(1)) == P("m*z1^(m - 1)"));
    CHECK(partial(P("m^z1"), z(1)) == P("ln(m)*m^z1"));
    CHECK(partial(P("1/2*m*zd1*zbd1"), zdot(1)) == P("1/2*m*zbd1"));
    CHECK(partial(P("m*g"), z(1)).is_zero());
}

TEST_CASE("mixed partials commute") {
    std::mt19937_64 rng(21);
    for (int k = 0; k < 200; ++k) {
        Expression e = random_canonical_expression(rng);
        for (const auto& u : kVars) {
            for (const auto& v : kVars) {
                REQUIRE_MESSAGE(expand(partial(partial(e, u), v)) == expand(partial(partial(e, v), u)), print_expr(e));
            }
        }
    }
}

TEST_CASE("conjugation exchanges the Wirtinger pair") {
    std::mt19937_64 rng(22);
    for (int k = 0; k < 200; ++k) {
        Expression e = random_canonical_expression(rng);
        REQUIRE(conjugate(partial(e, z(1))) == partial(conjugate(e), zbar(1)));
        REQUIRE(conjugate(partial(e, zdot(1))) == partial(conjugate(e), zbardot(1)));
    }
}

TEST_CASE("partials are linear and obey the product rule") {
    std::mt19937_64 rng(23);
    SamplingDomain domain;
    for (int k = 0; k < 100; ++k) {
        Expression a = random_canonical_expression(rng, smooth_options());
        Expression b = random_canonical_expression(rng, smooth_options());
        CHECK(partial(a + b, z(1)) == partial(a, z(1)) + partial(b, z(1)));
        auto cmp = equal_numeric(partial(a * b, zbar(1)), partial(a, zbar(1)) * b + a * partial(b, zbar(1)), 5, 1e-9,
                                 domain, 100 + k);
        CHECK_MESSAGE(cmp.equal, print_expr(a) << " ; " << print_expr(b));
    }
}

TEST_CASE("total time derivative") {
    CHECK(time_derivative(P("z1*zb1")) == P("zd1*zb1 + z1*zbd1"));
    CHECK(time_derivative(P("m*zd1")) == P("m*zdd1"));
    CHECK(time_derivative(P("t^2 + g")) == P("2*t"));
    CHECK(time_derivative(P("x1*yd1")) == P("xd1*yd1 + x1*ydd1"));
    CHECK_THROWS_AS(time_derivative(P("zdd1")), OrderOverflow);
    CHECK_THROWS_AS(time_derivative(P("z1 + xdd2")), OrderOverflow);
}

TEST_CASE("real chart") {
    CHECK(to_real_chart(P("z1*zb1"), 1) == P("x1^2 + y1^2"));
    CHECK(to_real_chart(P("zd1*zbd1"), 1) == P("xd1^2 + yd1^2"));
    CHECK(to_real_chart(P("z1 - zb1"), 1) == P("2*I*y1"));
    CHECK(to_real_chart(P("z2"), 1) == P("z2"));
    CHECK(max_index(P("z3 + zb1")) == 3);
    CHECK(max_index(P("m")) == 1);
}

TEST_CASE("finite differences agree with Wirtinger partials") {
    std::mt19937_64 rng(24);
    SamplingDomain domain;
    int checked = 0, unresolved = 0;
    for (int k = 0; k < 50; ++k) {
        Expression e = random_canonical_expression(rng, smooth_options());
        std::vector<Point> pts;
        try {
            pts = sample_points(domain, {e, partial(e, z(1)), partial(e, zbar(1))}, 3, 500 + k);
        } catch (const AllSamplesRejected&) {
            continue;
        }
        for (const auto& p : pts) {
            for (const auto& v : kVars) {
                auto r = wirtinger_fd_check(e, v, p);
                // Halving the step must leave the difference quotient in place,
                // otherwise truncation dominates and the point proves nothing.
                auto half = wirtinger_fd_check(e, v, p, 0.5e-5);
                double scale = 1.0 + std::abs(r.finite_difference);
                if (std::abs(r.finite_difference - half.finite_difference) > 1e-7 * scale) {
                    ++unresolved;
                    continue;
                }
                ++checked;
                CHECK_MESSAGE(r.rel_deviation < 1e-6, print_expr(e) << " wrt " << v.to_string());
            }
        }
    }
    CHECK(checked > 400);
    CHECK(unresolved < checked / 20);

    Point p{{z(1), {0.3, 0.4}}, {zbar(1), {0.3, -0.4}}};
    auto r = wirtinger_fd_check(P("z1^2*zb1"), z(1), p);
    CHECK(std::abs(r.symbolic - Complex(0.3, 0.4) * Complex(0.3, -0.4) * 2.0) < 1e-15);
    CHECK(r.abs_deviation < 1e-9);
}
