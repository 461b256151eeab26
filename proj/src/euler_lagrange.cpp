#include "complag/euler_lagrange.hpp"

#include "complag/error.hpp"

#include <cstdio>

namespace complag {

namespace {

Expression coord(Role r, int i) { return Expression(Symbol::coordinate(r, i)); }

void require_first_order(const Expression& L) {
    for (const auto& s : free_symbols(L)) {
        if (s.is_coordinate() && (s.role() == Role::Zddot || s.role() == Role::Zbarddot ||
                                  s.role() == Role::Xddot || s.role() == Role::Yddot)) {
            throw OrderOverflow("lagrangian contains the acceleration " + s.to_string());
        }
    }
}

std::string format_complex(const Complex& c) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", c.real(), c.imag());
    return buf;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Additive terms of a sum, or of a product with a single sum factor after
// distributing the remaining factors over it.
std::vector<Expression> additive_terms(const Expression& e) {
    if (e.kind() == Kind::Sum) return {e.children().begin(), e.children().end()};
    if (e.kind() != Kind::Product) return {e};
    std::vector<Expression> rest;
    const Expression* sum = nullptr;
    for (const auto& f : e.children()) {
        if (f.kind() == Kind::Sum && !sum) {
            sum = &f;
        } else {
            rest.push_back(f);
        }
    }
    if (!sum) return {e};
    std::vector<Expression> out;
    for (const auto& term : sum->children()) {
        std::vector<Expression> factors = rest;
        factors.push_back(term);
        out.push_back(mul(std::move(factors)));
    }
    return out;
}

const char* const kQ =
    "l^2*(zd1+zbd1)*Brod/Arod^2 + (zd1+zbd1)*Brod/(4*Arod) + (z1+zb1)*Brod^2/(4*Arod^2)"
    " + l*Brod*sin(theta)*(I*(zd1-zbd1) - Brod/Arod^(1/2))/(2*Arod^(3/2))"
    " - l*Brod*sin(theta)*(zd1+zbd1)*(zd1+zbd1 + (z1+zb1)*Brod/Arod)/(2*Arod)"
    " - 1/2*I*g";

const char* const kW =
    "l^2*(zd1+zbd1)/Arod + (zd1+zbd1)*Brod/(4*Arod) - 1/4*zd1 + 1/4*zbd1"
    " + l*sin(theta)*(I*(zd1-zbd1) - Brod/Arod^(1/2))/(2*Arod^(1/2))"
    " - l*Brod*sin(theta)*(zd1+zbd1)*(I - (z1+zb1)/Arod^(1/2))/(2*Arod^(1/2))";

const char* const kS =
    "-A/(2*z1)*sqrt(z1*zb1)^alpha"
    " + I*m*g*(z1-zb1)*zb1/(2*sqrt(z1*zb1)*(z1+zb1)*Wroot)"
    " + I*m*g*sqrt(z1*zb1)/((z1+zb1)*Wroot)"
    " - I*m*g*sqrt(z1*zb1)*(z1-zb1)/((z1+zb1)^2*Wroot)"
    " - I*m*g*sqrt(z1*zb1)*(z1-zb1)*(-(z1-zb1)/(z1+zb1)^2 + (z1-zb1)^2/(z1+zb1)^3)/((z1+zb1)*Wroot^3)";

const char* const kU = "1/2*m*zbd1";

}  // namespace

std::string_view mode_name(Mode mode) { return mode == Mode::Paper ? "paper" : "classical"; }

std::optional<Mode> parse_mode(std::string_view text) {
    if (text == "paper") return Mode::Paper;
    if (text == "classical") return Mode::Classical;
    return std::nullopt;
}

ELSystem derive_paper_mode(const SystemSpec& spec) {
    require_first_order(spec.lagrangian);
    ELSystem sys{Mode::Paper, spec.dof, {}, {}, spec};
    const Expression I = imaginary();
    for (int i = 1; i <= spec.dof; ++i) {
        Expression dz = partial(spec.lagrangian, Symbol::coordinate(Role::Z, i));
        Expression dzd = partial(spec.lagrangian, Symbol::coordinate(Role::Zdot, i));
        sys.first.push_back(I * time_derivative(dz) - dz);
        sys.second.push_back(I * time_derivative(dzd) + dzd);
    }
    return sys;
}

ELSystem derive_classical_mode(const SystemSpec& spec) {
    require_first_order(spec.lagrangian);
    ELSystem sys{Mode::Classical, spec.dof, {}, {}, spec};
    for (int i = 1; i <= spec.dof; ++i) {
        Expression dz = partial(spec.lagrangian, Symbol::coordinate(Role::Z, i));
        Expression dzb = partial(spec.lagrangian, Symbol::coordinate(Role::Zbar, i));
        Expression dzd = partial(spec.lagrangian, Symbol::coordinate(Role::Zdot, i));
        Expression dzbd = partial(spec.lagrangian, Symbol::coordinate(Role::Zbardot, i));
        sys.first.push_back(time_derivative(dzd) - dz);
        sys.second.push_back(time_derivative(dzbd) - dzb);
    }
    return sys;
}

ELSystem derive(const SystemSpec& spec, Mode mode) {
    return mode == Mode::Paper ? derive_paper_mode(spec) : derive_classical_mode(spec);
}

ApplicationOracle application1_oracle() {
    ApplicationOracle o;
    o.spec = parse_system(load_system_text("hinged-rod"));
    Expression s = coord(Role::Z, 1) + coord(Role::Zbar, 1);
    Expression v = coord(Role::Zdot, 1) + coord(Role::Zbardot, 1);
    Expression l(Symbol::parameter("l"));
    Binding b{
        {Symbol::parameter("Arod"), Expression::integer(4) * pow(l, 2) - pow(s, 2)},
        {Symbol::parameter("Brod"), s * v},
    };
    Expression m(Symbol::parameter("m"));
    o.first_label = "m*Q vs dL/dz1";
    o.first = m * substitute(parse_expr(kQ), b);
    o.second_label = "m*W vs dL/dzd1";
    o.second = m * substitute(parse_expr(kW), b);
    return o;
}

ApplicationOracle application2_oracle() {
    ApplicationOracle o;
    o.spec = parse_system(load_system_text("central-force"));
    Binding b{{Symbol::parameter("Wroot"), parse_expr("sqrt(1-(z1-zb1)^2/(z1+zb1)^2)")}};
    o.first_label = "S vs dL/dz1";
    o.first = substitute(parse_expr(kS), b);
    o.second_label = "U vs dL/dzd1";
    o.second = simplify(parse_expr(kU));
    return o;
}

ReconciliationReport reconcile(const std::string& label, const Expression& derived, const Expression& transcribed,
                               const SamplingDomain& domain, double tol, int samples, std::uint64_t seed) {
    ReconciliationReport r;
    r.label = label;
    r.tolerance = tol;
    NumericComparison c = equal_numeric(derived, transcribed, samples, tol, domain, seed);
    r.max_deviation = c.max_deviation;
    r.argmax = c.argmax;
    r.samples = c.samples;
    r.match = c.max_deviation <= tol;
    if (c.rejected > 0) r.notes.push_back("rejected samples: " + std::to_string(c.rejected));
    if (r.match) return r;

    Expression t = simplify(transcribed);
    Complex d = eval(derived, c.argmax);
    Complex total = eval(t, c.argmax);
    r.notes.push_back("derived at argmax: " + format_complex(d));
    r.notes.push_back("transcribed at argmax: " + format_complex(total));
    r.notes.push_back("difference at argmax: " + format_complex(d - total));
    int k = 0;
    for (const auto& term : additive_terms(t)) {
        Complex v = eval(term, c.argmax);
        double flipped = relative_deviation(d, total - 2.0 * v);
        r.notes.push_back("term " + std::to_string(++k) + ": value " + format_complex(v) +
                          ", deviation with sign flipped " + format_double(flipped) + ", text " + print_expr(term));
    }
    return r;
}

SamplingDomain system_domain(const SystemSpec& spec) {
    SamplingDomain d;
    d.dof = spec.dof;
    d.parameters = spec.parameters;
    d.loci = spec.locus_expressions();
    return d;
}

std::vector<ReconciliationReport> reconcile_application(const ApplicationOracle& oracle, double tol, int samples,
                                                        std::uint64_t seed) {
    SamplingDomain domain = system_domain(oracle.spec);
    if (oracle.spec.name == "central-force") {
        domain.position_re = {0.5, 2.0};
        domain.position_im = {-0.4, 0.4};
    }
    const Expression& L = oracle.spec.lagrangian;
    Expression dz = partial(L, Symbol::coordinate(Role::Z, 1));
    Expression dzd = partial(L, Symbol::coordinate(Role::Zdot, 1));
    return {
        reconcile(oracle.first_label, dz, oracle.first, domain, tol, samples, seed),
        reconcile(oracle.second_label, dzd, oracle.second, domain, tol, samples, seed),
    };
}

}  // namespace complag
