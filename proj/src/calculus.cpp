#include "complag/calculus.hpp"

#include "complag/error.hpp"

#include <unordered_map>

namespace complag {

namespace {

class Differentiator {
public:
    explicit Differentiator(const Symbol& v) : v_(v) {}

    Expression operator()(const Expression& e) {
        if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second.second;
        Expression d = compute(e);
        memo_.emplace(e.id(), std::make_pair(e, d));
        return d;
    }

private:
    Expression compute(const Expression& e) {
        switch (e.kind()) {
            case Kind::Constant: return Expression();
            case Kind::Parameter:
            case Kind::Coordinate:
            case Kind::Time: return e.symbol() == v_ ? Expression::integer(1) : Expression();
            case Kind::Sum: {
                std::vector<Expression> terms;
                for (const auto& c : e.children()) terms.push_back((*this)(c));
                return add(std::move(terms));
            }
            case Kind::Product: {
                std::vector<Expression> terms;
                auto factors = e.children();
                for (std::size_t k = 0; k < factors.size(); ++k) {
                    Expression dk = (*this)(factors[k]);
                    if (dk.is_zero()) continue;
                    std::vector<Expression> product{dk};
                    for (std::size_t j = 0; j < factors.size(); ++j) {
                        if (j != k) product.push_back(factors[j]);
                    }
                    terms.push_back(mul(std::move(product)));
                }
                return add(std::move(terms));
            }
            case Kind::Power: {
                const Expression& base = e.child(0);
                const Expression& exponent = e.child(1);
                Expression db = (*this)(base);
                Expression de = (*this)(exponent);
                Expression out;
                if (!db.is_zero()) {
                    out += mul({exponent, power(base, exponent - Expression::integer(1)), db});
                }
                if (!de.is_zero()) out += mul({e, ln(base), de});
                return out;
            }
            case Kind::Function: {
                const Expression& x = e.child(0);
                Expression dx = (*this)(x);
                if (dx.is_zero()) return Expression();
                switch (e.function()) {
                    case Function::Sin: return cos(x) * dx;
                    case Function::Cos: return -(sin(x) * dx);
                    case Function::Exp: return e * dx;
                    case Function::Ln: return dx / x;
                    case Function::Sqrt: return mul({Expression::fraction(1, 2), power(x, Expression::fraction(-1, 2)), dx});
                }
                return Expression();
            }
            default: return (*this)(simplify(e));
        }
    }

    Symbol v_;
    std::unordered_map<const void*, std::pair<Expression, Expression>> memo_;
};

std::optional<Role> time_successor(Role r) {
    switch (r) {
        case Role::Z: return Role::Zdot;
        case Role::Zbar: return Role::Zbardot;
        case Role::Zdot: return Role::Zddot;
        case Role::Zbardot: return Role::Zbarddot;
        case Role::X: return Role::Xdot;
        case Role::Y: return Role::Ydot;
        case Role::Xdot: return Role::Xddot;
        case Role::Ydot: return Role::Yddot;
        default: return std::nullopt;
    }
}

// Real-chart partner roles of a complex role: (x-role, y-role, sign of I*y).
struct ChartRoles {
    Role x;
    Role y;
    int sign;
};

std::optional<ChartRoles> chart_roles(Role r) {
    switch (r) {
        case Role::Z: return ChartRoles{Role::X, Role::Y, 1};
        case Role::Zbar: return ChartRoles{Role::X, Role::Y, -1};
        case Role::Zdot: return ChartRoles{Role::Xdot, Role::Ydot, 1};
        case Role::Zbardot: return ChartRoles{Role::Xdot, Role::Ydot, -1};
        case Role::Zddot: return ChartRoles{Role::Xddot, Role::Yddot, 1};
        case Role::Zbarddot: return ChartRoles{Role::Xddot, Role::Yddot, -1};
        default: return std::nullopt;
    }
}

constexpr Role kComplexRoles[] = {Role::Z, Role::Zbar, Role::Zdot, Role::Zbardot, Role::Zddot, Role::Zbarddot};

}  // namespace

Expression partial(const Expression& e, const Symbol& v) {
    Differentiator d(v);
    return d(simplify(e));
}

Expression time_derivative(const Expression& e) {
    Expression s = simplify(e);
    Expression out;
    for (const auto& sym : free_symbols(s)) {
        if (sym.is_time()) {
            out += partial(s, sym);
        } else if (sym.is_coordinate()) {
            auto next = time_successor(sym.role());
            if (!next) {
                throw OrderOverflow("time derivative of an expression containing " + sym.to_string());
            }
            out += partial(s, sym) * Expression(Symbol::coordinate(*next, sym.index()));
        }
    }
    return out;
}

Expression real_chart(const Expression& e, int dof) {
    Binding b;
    for (int i = 1; i <= dof; ++i) {
        for (Role r : kComplexRoles) {
            auto c = *chart_roles(r);
            Expression y(Symbol::coordinate(c.y, i));
            b[Symbol::coordinate(r, i)] =
                Expression(Symbol::coordinate(c.x, i)) + Expression::integer(c.sign) * imaginary() * y;
        }
    }
    return substitute(e, b);
}

Expression to_real_chart(const Expression& e, int dof) { return expand(real_chart(e, dof)); }

int max_index(const Expression& e) {
    int n = 1;
    for (const auto& s : free_symbols(e)) {
        if (s.is_coordinate()) n = std::max(n, s.index());
    }
    return n;
}

FiniteDifferenceReport wirtinger_fd_check(const Expression& e, const Symbol& v, const Point& point, double step) {
    if (!(step > 0)) throw DomainError("finite-difference step must be positive");
    FiniteDifferenceReport report;
    report.symbolic = eval(partial(e, v), point);

    int dof = std::max(max_index(e), v.is_coordinate() ? v.index() : 1);
    Expression chart = real_chart(e, dof);

    // Real-chart point: x = Re z, y = Im z for each complex family.
    Point real_point;
    for (const auto& [sym, value] : point) {
        if (!sym.is_coordinate()) {
            real_point[sym] = value;
            continue;
        }
        auto c = chart_roles(sym.role());
        if (!c) {
            real_point[sym] = value;
        } else if (c->sign > 0) {
            real_point[Symbol::coordinate(c->x, sym.index())] = value.real();
            real_point[Symbol::coordinate(c->y, sym.index())] = value.imag();
        }
    }

    double scale = 0.0;
    auto central = [&](const Symbol& s) {
        Point plus = real_point, minus = real_point;
        plus[s] += step;
        minus[s] -= step;
        return (eval(chart, plus) - eval(chart, minus)) / (2.0 * step);
    };

    if (auto c = v.is_coordinate() ? chart_roles(v.role()) : std::nullopt) {
        Complex dx = central(Symbol::coordinate(c->x, v.index()));
        Complex dy = central(Symbol::coordinate(c->y, v.index()));
        report.finite_difference = 0.5 * (dx - static_cast<double>(c->sign) * Complex(0, 1) * dy);
        // The two chart derivatives can cancel, so their size sets the scale.
        scale = std::max(std::abs(report.symbolic), 0.5 * (std::abs(dx) + std::abs(dy)));
    } else {
        report.finite_difference = central(v);
        scale = std::abs(report.symbolic);
    }
    report.abs_deviation = std::abs(report.symbolic - report.finite_difference);
    report.rel_deviation = report.abs_deviation / (1.0 + scale);
    return report;
}

}  // namespace complag
