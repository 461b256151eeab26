#include "complag/dynamics.hpp"
#include "complag/error.hpp"
#include "complag/generate.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace complag;

namespace {

Expression P(const char* text) { return simplify(parse_expr(text)); }

SystemSpec builtin(const char* name) { return parse_system(load_system_text(name)); }

State start(Complex z0, Complex zd0) { return State{0.0, {z0}, {zd0}}; }

// Oscillator from z0 = 1, zd0 = I is z(t) = exp(I*t).
double oscillator_error(double t_end, double dt) {
    LagrangianDynamics dyn(builtin("oscillator"));
    Trajectory tr = integrate(dyn, start(1.0, {0.0, 1.0}), t_end, dt);
    double worst = 0.0;
    for (const auto& s : tr.states) worst = std::max(worst, std::abs(s.z[0] - std::exp(Complex(0.0, s.t))));
    return worst;
}

std::vector<Complex> inputs_for(const Point& p, int dof) {
    std::vector<Complex> in(input_count(dof));
    for (const auto& [s, v] : p) {
        if (s.is_time()) in.back() = v;
        if (s.is_coordinate() && s.index() <= dof && static_cast<int>(s.role()) <= static_cast<int>(Role::Zbarddot)) {
            in[input_slot(s.role(), s.index())] = v;
        }
    }
    return in;
}

}  // namespace

TEST_CASE("input layout") {
    CHECK(input_count(2) == 13);
    CHECK(input_slot(Role::Z, 1) == 0);
    CHECK(input_slot(Role::Zbarddot, 1) == 5);
    CHECK(input_slot(Role::Zdot, 2) == 8);
}

TEST_CASE("compiled tapes agree with the tree evaluator") {
    SystemSpec spec = builtin("central-force");
    spec.parameters["g"] = 9.8;
    std::mt19937_64 rng(41);
    RandomTreeOptions opts;
    opts.parameters = {"m", "g", "A"};
    SamplingDomain domain;
    domain.parameters = spec.parameters;
    int compared = 0;
    for (int k = 0; k < 200; ++k) {
        std::vector<Expression> exprs{random_canonical_expression(rng, opts), random_canonical_expression(rng, opts)};
        CompiledFunction f(exprs, spec);
        REQUIRE(f.outputs() == 2);
        for (int j = 0; j < 5; ++j) {
            Point p = domain.draw(rng, {"m", "g", "A"});
            std::vector<Complex> got;
            try {
                got = f(inputs_for(p, 1));
            } catch (const Error&) {
                continue;
            }
            for (std::size_t o = 0; o < exprs.size(); ++o) {
                Complex want;
                try {
                    want = eval(exprs[o], p);
                } catch (const Error&) {
                    continue;
                }
                if (!std::isfinite(std::abs(want)) || !std::isfinite(std::abs(got[o]))) continue;
                ++compared;
                REQUIRE_MESSAGE(relative_deviation(want, got[o]) < 1e-10, print_expr(exprs[o]));
            }
        }
    }
    CHECK(compared > 1000);
}

TEST_CASE("compiled tapes share common subtrees") {
    SystemSpec spec = builtin("oscillator");
    Expression e = P("(z1 + zb1)^2 + sin(z1 + zb1)");
    CompiledFunction once({e}, spec);
    CompiledFunction twice({e, e}, spec);
    CHECK(twice.tape_size() == once.tape_size());
    CHECK_THROWS_AS(CompiledFunction({P("k*z1")}, spec), UnboundSymbol);
    CHECK_THROWS_AS(CompiledFunction({P("z2")}, spec), UnboundSymbol);
}

TEST_CASE("single oscillator step") {
    LagrangianDynamics dyn(builtin("oscillator"));
    State s = rk4_step(dyn, start(1.0, {0.0, 1.0}), 1e-3);
    CHECK(std::abs(s.z[0] - std::exp(Complex(0.0, 1e-3))) < 1e-14);
    CHECK(std::abs(s.zdot[0] - Complex(0.0, 1.0) * std::exp(Complex(0.0, 1e-3))) < 1e-14);
    CHECK(s.t == 1e-3);
}

TEST_CASE("oscillator accuracy and convergence order") {
    CHECK(oscillator_error(10.0, 1e-3) < 1e-6);
    double e4 = oscillator_error(2.0, 0.04);
    double e2 = oscillator_error(2.0, 0.02);
    double e1 = oscillator_error(2.0, 0.01);
    CHECK(std::log2(e4 / e2) == doctest::Approx(4.0).epsilon(0.3 / 4));
    CHECK(std::log2(e2 / e1) == doctest::Approx(4.0).epsilon(0.3 / 4));
}

TEST_CASE("free particle moves on a line") {
    LagrangianDynamics dyn(builtin("free-particle"));
    Trajectory tr = integrate(dyn, start({1.0, -1.0}, {0.5, 0.25}), 2.0, 0.1);
    REQUIRE(tr.states.size() == 21);
    const State& last = tr.states.back();
    CHECK(last.t == 2.0);
    CHECK(std::abs(last.z[0] - Complex(2.0, -0.5)) < 1e-13);
    CHECK(tr.drift < 1e-14);
}

TEST_CASE("time reversal") {
    LagrangianDynamics dyn(builtin("central-force"));
    State s = start(1.2, {0.0, 0.3});
    State f = s;
    for (int k = 0; k < 200; ++k) f = rk4_step(dyn, f, 1e-3);
    State b = f;
    for (int k = 0; k < 200; ++k) b = rk4_step(dyn, b, -1e-3);
    CHECK(std::abs(b.z[0] - s.z[0]) < 1e-10);
    CHECK(std::abs(b.zdot[0] - s.zdot[0]) < 1e-10);
}

TEST_CASE("conjugate channels stay paired") {
    LagrangianDynamics dyn(builtin("central-force"));
    PhaseState p{0.0, {1.2}, {1.2}, {{0.0, 0.3}}, {{0.0, -0.3}}};
    auto states = integrate_phase(dyn, p, 0.5, 1e-3);
    Trajectory tr = integrate(dyn, start(1.2, {0.0, 0.3}), 0.5, 1e-3);
    REQUIRE(states.size() == tr.states.size());
    for (std::size_t k = 0; k < states.size(); ++k) {
        CHECK(std::abs(states[k].zb[0] - std::conj(states[k].z[0])) < 1e-12);
        CHECK(std::abs(states[k].zbdot[0] - std::conj(states[k].zdot[0])) < 1e-12);
        CHECK(std::abs(states[k].z[0] - tr.states[k].z[0]) < 1e-12);
    }
}

TEST_CASE("accelerations solve the classical equations") {
    SystemSpec spec = builtin("central-force");
    LagrangianDynamics dyn(spec);
    PhaseState p{0.0, {1.0}, {1.0}, {{0.0, 1.0}}, {{0.0, -1.0}}};
    Accelerations a = dyn.accelerations(p);
    Point at = spec.parameter_point();
    at[z(1)] = 1.0;
    at[zbar(1)] = 1.0;
    Complex S = eval(partial(spec.lagrangian, z(1)), at);
    CHECK(std::abs(a.zbddot[0] - 2.0 * S) < 1e-12);
    CHECK(std::abs(a.zddot[0] - std::conj(2.0 * S)) < 1e-12);
    CHECK(a.residual < 1e-12);
    CHECK(a.condition < 10.0);

    std::vector<Complex> in = dyn.inputs(p, &a);
    for (const auto& r : dyn.equations().first) {
        Point full = at;
        full[zdot(1)] = in[input_slot(Role::Zdot, 1)];
        full[zbardot(1)] = in[input_slot(Role::Zbardot, 1)];
        full[zddot(1)] = a.zddot[0];
        full[zbarddot(1)] = a.zbddot[0];
        CHECK(std::abs(eval(r, full)) < 1e-12);
    }
}

TEST_CASE("degenerate and singular states") {
    SystemSpec flat = parse_system("[system]\nname = f\ndof = 1\n[lagrangian]\nL = z1*zb1\n");
    LagrangianDynamics dyn(flat);
    CHECK_THROWS_AS(dyn.accelerations(start(1.0, 0.0)), SingularMassMatrix);

    LagrangianDynamics rod(builtin("hinged-rod"));
    CHECK_THROWS_AS(rod.accelerations(start(1.0, 0.0)), SingularLocus);
    try {
        integrate(rod, start(0.99, 0.5), 1.0, 1e-3);
        FAIL("expected the rod to reach the locus");
    } catch (const IntegrationAborted& e) {
        CHECK(std::string(e.what()).find("A") != std::string::npos);
        CHECK_FALSE(e.partial().states.empty());
        CHECK(e.time() < 1.0);
    }
    CHECK_THROWS_AS(integrate(rod, start(0.5, 0.0), 1.0, -1e-3), DomainError);
    CHECK_THROWS_AS(integrate(rod, start(0.5, 0.0), 0.0, 1e-3), DomainError);
}

TEST_CASE("trajectory CSV") {
    LagrangianDynamics dyn(builtin("oscillator"));
    Trajectory tr = integrate(dyn, start(1.0, {0.0, 1.0}), 0.02, 0.01);
    std::ostringstream os;
    write_csv_header(os, 1);
    write_csv_rows(os, tr);
    std::string csv = os.str();
    CHECK(csv.rfind("t,re_z1,im_z1,re_zd1,im_zd1,re_E,im_E,re_EL_paper,im_EL_paper\n0,1,0,0,1,2,0,2,0\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}
