// Acceptance criteria runner: one PASS/FAIL line per criterion.
#include "complag/cli.hpp"
#include "complag/dynamics.hpp"
#include "complag/generate.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace complag;

namespace {

struct Result {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    const char* id;
    const char* title;
    double budget_s;  // 0 when the criterion sets no runtime bound
    std::function<Result()> run;
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

Expression P(const char* text) { return simplify(parse_expr(text)); }

SystemSpec builtin(const char* name) { return parse_system(load_system_text(name)); }

const Symbol kVars[] = {z(1), zbar(1), zdot(1), zbardot(1)};

int run_binary(const std::string& args, std::string& out) {
    std::string cmd = std::string("\"") + COMPLAG_BINARY + "\" " + args + " 2>/dev/null";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return -1;
    char buf[4096];
    std::size_t n;
    out.clear();
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    int status = ::pclose(pipe);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Worst relative FD deviation of the four first partials over `count` points.
double worst_fd(const Expression& e, const SamplingDomain& domain, int count, std::uint64_t seed) {
    std::vector<Expression> guard{e};
    for (const auto& v : kVars) guard.push_back(partial(e, v));
    double worst = 0.0;
    for (const auto& p : sample_points(domain, guard, count, seed)) {
        for (const auto& v : kVars) worst = std::max(worst, wirtinger_fd_check(e, v, p, 1e-5).rel_deviation);
    }
    return worst;
}

Result ac1() {
    double worst = 0.0;
    int exprs = 0;
    for (const char* name : {"hinged-rod", "central-force"}) {
        SystemSpec s = builtin(name);
        worst = std::max(worst, worst_fd(s.lagrangian, system_domain(s), 10, 1));
        ++exprs;
    }
    std::mt19937_64 rng(2024);
    SamplingDomain domain;
    while (exprs < 22) {
        Expression e = random_canonical_expression(rng);
        try {
            worst = std::max(worst, worst_fd(e, domain, 10, 100 + exprs));
        } catch (const AllSamplesRejected&) {
            continue;
        }
        ++exprs;
    }
    return {worst < 1e-6, "expressions=" + std::to_string(exprs) + " points=10 worst_rel=" + sci(worst) + " tol=1e-6"};
}

Result ac2() {
    SystemSpec s = builtin("central-force");
    Expression U = partial(s.lagrangian, zdot(1));
    bool structural = U == P("1/2*m*zbd1");
    auto num = equal_numeric(U, P("1/2*m*zbd1"), 100, 1e-12, system_domain(s));
    return {structural && num.equal, "dL/dzd1 = " + print_expr(U) + " structural=" + (structural ? "yes" : "no") +
                                         " numeric_max=" + sci(num.max_deviation) + " tol=1e-12"};
}

Result ac3() {
    auto cf = reconcile_application(application2_oracle(), 1e-9, 100, 12345);
    auto rod1 = reconcile_application(application1_oracle(), 1e-9, 100, 12345);
    auto rod2 = reconcile_application(application1_oracle(), 1e-9, 100, 12345);
    bool deterministic = rod1.size() == rod2.size();
    bool recorded = true;
    for (std::size_t k = 0; deterministic && k < rod1.size(); ++k) {
        deterministic = rod1[k].max_deviation == rod2[k].max_deviation && rod1[k].argmax == rod2[k].argmax &&
                        rod1[k].notes == rod2[k].notes;
        if (!rod1[k].match) recorded = recorded && !rod1[k].argmax.empty() && std::isfinite(rod1[k].max_deviation);
    }
    std::string out1, out2;
    bool cli_same = run_binary("reconcile --system hinged-rod", out1) == 0 &&
                    run_binary("reconcile --system hinged-rod", out2) == 0 && out1 == out2;
    bool pass = cf[0].match && cf[0].samples == 100 && deterministic && recorded && cli_same;
    std::string d = "S_dev=" + sci(cf[0].max_deviation) + " (" + std::string(cf[0].verdict()) + ", tol=1e-9)";
    for (const auto& r : rod1) d += "; " + r.label + ": " + std::string(r.verdict()) + " dev=" + sci(r.max_deviation);
    d += std::string("; deterministic=") + (deterministic && cli_same ? "yes" : "no");
    return {pass, d};
}

Result ac4() {
    std::mt19937_64 rng(4);
    RandomTreeOptions opts;
    opts.max_depth = 2;
    int j_fail = 0;
    for (int k = 0; k < 100; ++k) {
        int n = 1 + static_cast<int>(rng() % 3);
        ExprVector v(2 * n);
        for (int a = 0; a < 2 * n; ++a) v(a) = random_canonical_expression(rng, opts);
        ExprVector w = apply_J<Expression>(apply_J<Expression>(v));
        for (int a = 0; a < 2 * n; ++a) j_fail += w(a) == -v(a) ? 0 : 1;
    }
    int schwarz_fail = 0;
    double closed = 0.0;
    for (const char* name : {"hinged-rod", "central-force"}) {
        SystemSpec s = builtin(name);
        KaehlerData k = kaehler_coefficients(s.lagrangian, 1);
        schwarz_fail += k.H_zbz == k.H_zzb.transpose().eval() ? 0 : 1;
        for (const auto& u : kVars) {
            for (const auto& v : kVars) schwarz_fail += partial(partial(s.lagrangian, u), v) == partial(partial(s.lagrangian, v), u) ? 0 : 1;
        }
        closed = std::max(closed, third_partial_asymmetry(s.lagrangian, 1, sample_points(system_domain(s), {s.lagrangian}, 10, 5)));
    }
    return {j_fail == 0 && schwarz_fail == 0 && closed < 1e-9,
            "J^2 mismatches=" + std::to_string(j_fail) + "/100 vectors; Schwarz mismatches=" +
                std::to_string(schwarz_fail) + "; third-partial asymmetry=" + sci(closed) + " tol=1e-9"};
}

Result ac5() {
    std::string out;
    int code = run_binary("derive --system central-force --mode paper", out);
    std::string golden = slurp(std::string(COMPLAG_GOLDEN_DIR) + "/central-force-paper.dump");
    Document d = parse_document(out);
    const Document::Entry* r2 = d.find("equations", "R2_1");
    bool same = r2 && simplify(parse_expr(r2->value)) == P("I*(1/2*m*zbdd1) + 1/2*m*zbd1");
    return {code == 0 && same && out == golden,
            "R2_1 = " + (r2 ? r2->value : std::string("<missing>")) + " golden=" + (out == golden ? "identical" : "differs")};
}

double oscillator_error(double t_end, double dt) {
    LagrangianDynamics dyn(builtin("oscillator"));
    Trajectory tr = integrate(dyn, State{0.0, {1.0}, {{0.0, 1.0}}}, t_end, dt);
    double worst = 0.0;
    for (const auto& s : tr.states) worst = std::max(worst, std::abs(s.z[0] - std::exp(Complex(0.0, s.t))));
    return worst;
}

Result ac6() {
    double e4 = oscillator_error(10.0, 4e-3);
    double e2 = oscillator_error(10.0, 2e-3);
    double e1 = oscillator_error(10.0, 1e-3);
    double p1 = std::log2(e4 / e2);
    double p2 = std::log2(e2 / e1);
    bool orders = std::abs(p1 - 4.0) <= 0.3 && std::abs(p2 - 4.0) <= 0.3;
    return {e1 < 1e-6 && orders, "max_err(dt=1e-3)=" + sci(e1) + " order(4e-3/2e-3)=" + sci(p1) +
                                     " order(2e-3/1e-3)=" + sci(p2)};
}

// The documented failure mode of criterion 7: the trajectory reaches the
// z + zb = 0 locus before t = 5.
bool ac7_known_red = false;

Result ac7() {
    LagrangianDynamics dyn(builtin("central-force"));
    try {
        Trajectory tr = integrate(dyn, State{0.0, {1.2}, {{0.0, 0.3}}}, 5.0, 1e-3);
        double paper_var = 0.0;
        for (const auto& e : tr.paper_energy) paper_var = std::max(paper_var, std::abs(e - tr.paper_energy.front()));
        return {tr.drift < 1e-8, "classical drift=" + sci(tr.drift) + " tol=1e-8; paper energy variation=" + sci(paper_var)};
    } catch (const IntegrationAborted& e) {
        const Trajectory& tr = e.partial();
        bool axis = false;
        try {
            std::rethrow_exception(e.cause());
        } catch (const SingularLocus& s) {
            axis = s.locus() == "axis";
        } catch (...) {
        }
        ac7_known_red = axis && e.time() > 0.9 && e.time() < 1.0 && tr.drift < 1e-8;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3f", e.time());
        return {false, std::string("aborted at t=") + buf + " (" + e.what() + "); drift before abort=" +
                           sci(tr.drift) + "; energy over [0,5] undefined past the locus"};
    }
}

Result ac8() {
    std::mt19937_64 rng(8);
    int round = 0, invol = 0, idem = 0;
    for (int k = 0; k < 1000; ++k) {
        Expression s = random_canonical_expression(rng);
        round += simplify(parse_expr(print_expr(s))) == s ? 0 : 1;
        invol += conjugate(conjugate(s)) == s ? 0 : 1;
        idem += simplify(s) == s ? 0 : 1;
    }
    int differing = 0;
    for (const char* args : {"derive --system hinged-rod", "verify --system central-force --seed 12345",
                             "reconcile --system central-force --seed 12345",
                             "simulate --system oscillator --z0 1,0 --zd0 0,1 --t-end 1 --dt 1e-3"}) {
        std::string a, b;
        int ca = run_binary(args, a);
        int cb = run_binary(args, b);
        differing += (ca == 0 && cb == 0 && a == b && !a.empty()) ? 0 : 1;
    }
    return {round == 0 && invol == 0 && idem == 0 && differing == 0,
            "round-trip failures=" + std::to_string(round) + "/1000 involution=" + std::to_string(invol) +
                "/1000 idempotence=" + std::to_string(idem) + "/1000 nondeterministic CLI runs=" +
                std::to_string(differing) + "/4"};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"AC1", "Wirtinger partials vs finite differences", 5.0, ac1},
        {"AC2", "central-force momentum", 0.0, ac2},
        {"AC3", "application reconciliation", 0.0, ac3},
        {"AC4", "geometry identities", 0.0, ac4},
        {"AC5", "paper-mode derivation golden", 0.0, ac5},
        {"AC6", "oscillator accuracy and RK4 order", 2.0, ac6},
        {"AC7", "central-force energy conservation", 0.0, ac7},
        {"AC8", "infrastructure properties", 0.0, ac8},
    };
    using clock = std::chrono::steady_clock;
    auto suite_start = clock::now();
    int failed = 0;
    bool unexpected = false;
    for (const auto& c : criteria) {
        auto t0 = clock::now();
        Result r;
        try {
            r = c.run();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(clock::now() - t0).count();
        if (c.budget_s > 0 && secs >= c.budget_s) {
            r.pass = false;
            r.detail += "; over the " + std::to_string(static_cast<int>(c.budget_s)) + " s budget";
        }
        std::printf("%s %s  %s  [%s] (%.2f s)\n", c.id, r.pass ? "PASS" : "FAIL", c.title, r.detail.c_str(), secs);
        std::fflush(stdout);
        if (!r.pass) {
            ++failed;
            bool documented = std::string(c.id) == "AC7" && ac7_known_red;
            unexpected = unexpected || !documented;
        }
    }
    double total = std::chrono::duration<double>(clock::now() - suite_start).count();
    std::printf("summary: %d/%zu criteria pass (%.2f s)\n", static_cast<int>(criteria.size()) - failed,
                criteria.size(), total);
    if (failed && !unexpected) {
        std::printf("AC7 stays red: the stated trajectory reaches the z + zb = 0 locus near t = 0.98, where the "
                    "potential is discontinuous; no other criterion failed\n");
    }
    return unexpected ? 1 : 0;
}
