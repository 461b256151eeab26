#include "complag/error.hpp"
#include "complag/euler_lagrange.hpp"
#include "complag/generate.hpp"

#include <doctest.h>

using namespace complag;

namespace {

Expression P(const char* text) { return simplify(parse_expr(text)); }

SystemSpec builtin(const char* name) { return parse_system(load_system_text(name)); }

SystemSpec system_from(const std::string& lagrangian, int dof = 1) {
    return parse_system("[system]\nname = t\ndof = " + std::to_string(dof) +
                        "\n[params]\nm = 1\ng = 2\n[lagrangian]\nL = " + lagrangian + "\n");
}

bool equivalent(const Expression& a, const Expression& b) { return expand(a - b).is_zero(); }

}  // namespace

TEST_CASE("mode names") {
    CHECK(parse_mode("paper") == Mode::Paper);
    CHECK(parse_mode("classical") == Mode::Classical);
    CHECK_FALSE(parse_mode("hamiltonian"));
    CHECK(mode_name(Mode::Classical) == "classical");
}

TEST_CASE("oscillator equations in both modes") {
    SystemSpec s = builtin("oscillator");
    ELSystem c = derive_classical_mode(s);
    REQUIRE(c.first.size() == 1);
    CHECK(c.first[0] == P("zbdd1 + zb1"));
    CHECK(c.second[0] == P("zdd1 + z1"));
    ELSystem p = derive_paper_mode(s);
    CHECK(p.first[0] == P("-I*zbd1 + zb1"));
    CHECK(p.second[0] == P("I*zbdd1 + zbd1"));
    CHECK(derive(s, Mode::Paper).first == p.first);
}

TEST_CASE("free particle") {
    ELSystem c = derive_classical_mode(builtin("free-particle"));
    CHECK(c.first[0] == P("zbdd1"));
    ELSystem p = derive_paper_mode(builtin("free-particle"));
    CHECK(p.first[0].is_zero());
}

TEST_CASE("accelerations in the Lagrangian are rejected") {
    SystemSpec s = system_from("zd1*zbd1 + zdd1");
    CHECK_THROWS_AS(derive_paper_mode(s), OrderOverflow);
    CHECK_THROWS_AS(derive_classical_mode(s), OrderOverflow);
}

TEST_CASE("central force momentum and paper-mode second relation") {
    SystemSpec s = builtin("central-force");
    CHECK(partial(s.lagrangian, zdot(1)) == P("1/2*m*zbd1"));
    ELSystem p = derive_paper_mode(s);
    CHECK(p.second[0] == P("I*(1/2*m*zbdd1) + 1/2*m*zbd1"));
    ELSystem c = derive_classical_mode(s);
    Expression S = partial(s.lagrangian, z(1));
    CHECK(equivalent(c.first[0], P("1/2*m*zbdd1") - S));
}

TEST_CASE("equations are affine in the accelerations") {
    for (const char* name : {"hinged-rod", "central-force", "oscillator"}) {
        CAPTURE(name);
        SystemSpec s = builtin(name);
        for (Mode mode : {Mode::Paper, Mode::Classical}) {
            ELSystem e = derive(s, mode);
            for (const auto& r : e.first) {
                for (const Symbol& a : {zddot(1), zbarddot(1)}) {
                    for (const Symbol& b : {zddot(1), zbarddot(1)}) CHECK(partial(partial(r, a), b).is_zero());
                }
            }
        }
    }
}

TEST_CASE("classical equations of a real Lagrangian close under conjugation") {
    for (const char* name : {"hinged-rod", "central-force"}) {
        ELSystem c = derive_classical_mode(builtin(name));
        CHECK(conjugate(c.first[0]) == c.second[0]);
    }
    SystemSpec two = system_from("m*zd1*zbd1 + zd2*zbd2 + g*(z1*zb2 + z2*zb1) + sin(z1*zb1)", 2);
    ELSystem c = derive_classical_mode(two);
    REQUIRE(c.first.size() == 2);
    for (int i = 0; i < 2; ++i) CHECK(conjugate(c.first[i]) == c.second[i]);
}

TEST_CASE("central force transcription matches") {
    ApplicationOracle o = application2_oracle();
    auto reports = reconcile_application(o, 1e-9, 100, 12345);
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].match);
    CHECK(reports[0].max_deviation < 1e-9);
    CHECK(reports[0].samples == 100);
    CHECK(reports[1].match);
    CHECK(o.second == P("1/2*m*zbd1"));
}

TEST_CASE("hinged rod transcription diverges with a recorded witness") {
    ApplicationOracle o = application1_oracle();
    auto first = reconcile_application(o, 1e-9, 100, 12345);
    auto second = reconcile_application(o, 1e-9, 100, 12345);
    REQUIRE(first.size() == 2);
    for (std::size_t k = 0; k < first.size(); ++k) {
        CHECK_FALSE(first[k].match);
        CHECK(first[k].verdict() == "divergence");
        CHECK_FALSE(first[k].argmax.empty());
        CHECK_FALSE(first[k].notes.empty());
        CHECK(first[k].max_deviation == second[k].max_deviation);
        CHECK(first[k].argmax == second[k].argmax);
        CHECK(first[k].notes == second[k].notes);
    }
}

TEST_CASE("reconcile reports") {
    SamplingDomain d;
    auto same = reconcile("same", P("(z1 + zb1)^2"), P("z1^2 + 2*z1*zb1 + zb1^2"), d, 1e-12, 20, 1);
    CHECK(same.match);
    CHECK(same.notes.empty());
    auto diff = reconcile("diff", P("z1 + zb1"), P("z1 - zb1"), d, 1e-12, 20, 1);
    CHECK_FALSE(diff.match);
    CHECK(diff.notes.size() >= 3);
    SamplingDomain nowhere;
    nowhere.loci = {P("1")};
    nowhere.locus_guard = 10.0;
    CHECK_THROWS_AS(reconcile("none", P("z1"), P("z1"), nowhere, 1e-12, 5, 1), AllSamplesRejected);
}
