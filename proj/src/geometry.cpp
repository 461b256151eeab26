#include "complag/geometry.hpp"

namespace complag {

namespace {

Expression zsym(Role r, int i) { return Expression(Symbol::coordinate(r, i)); }

ExprMatrix hessian_block(const Expression& L, int n, Role a, Role b) {
    // H_ab(i, j) = d/da^j (dL/db^i)
    ExprMatrix H(n, n);
    for (int i = 0; i < n; ++i) {
        Expression first = partial(L, Symbol::coordinate(b, i + 1));
        for (int j = 0; j < n; ++j) H(i, j) = partial(first, Symbol::coordinate(a, j + 1));
    }
    return H;
}

void check_tangent(const KaehlerData& k, const ExprVector& xi) {
    if (xi.size() != 2 * k.dof) {
        throw DimensionMismatch("tangent vector has " + std::to_string(xi.size()) + " coefficients, expected " +
                                std::to_string(2 * k.dof));
    }
}

}  // namespace

KaehlerData kaehler_coefficients(const Expression& L, int dof) {
    KaehlerData k;
    k.dof = dof;
    Expression l = simplify(L);
    k.H_zz = hessian_block(l, dof, Role::Z, Role::Z);
    k.H_zbz = hessian_block(l, dof, Role::Zbar, Role::Z);
    k.H_zzb = hessian_block(l, dof, Role::Z, Role::Zbar);
    k.H_zbzb = hessian_block(l, dof, Role::Zbar, Role::Zbar);
    return k;
}

KaehlerData kaehler_data(const Expression& L, int dof) {
    KaehlerData k = kaehler_coefficients(L, dof);
    k.energy = paper_energy(L, dof);
    k.dEL = energy_differential(k.energy, dof);
    k.i_xi_PhiL = interior_product(k, semispray(dof));
    return k;
}

ExprMatrix kaehler_form(const KaehlerData& k) {
    const int n = k.dof;
    ExprMatrix W = ExprMatrix::Constant(2 * n, 2 * n, Expression());
    const Expression two_i = Expression::integer(2) * imaginary();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            // d^2L/dz^i dzb^j is H_zbz(i, j)
            W(i, n + j) = two_i * k.H_zbz(i, j);
            W(n + j, i) = -W(i, n + j);
        }
    }
    return W;
}

ExprMatrix kaehler_form_direct(const Expression& L, int dof) {
    const int n = dof;
    std::vector<Symbol> basis;
    for (int i = 1; i <= n; ++i) basis.push_back(Symbol::coordinate(Role::Z, i));
    for (int i = 1; i <= n; ++i) basis.push_back(Symbol::coordinate(Role::Zbar, i));

    ExprVector alpha(2 * n);
    for (int k = 0; k < n; ++k) {
        alpha(k) = imaginary() * partial(L, basis[k]);
        alpha(n + k) = -(imaginary() * partial(L, basis[n + k]));
    }
    ExprMatrix W(2 * n, 2 * n);
    for (int a = 0; a < 2 * n; ++a) {
        for (int b = 0; b < 2 * n; ++b) {
            W(a, b) = partial(alpha(a), basis[b]) - partial(alpha(b), basis[a]);
        }
    }
    return W;
}

ExprVector semispray(int dof) {
    ExprVector xi(2 * dof);
    for (int i = 0; i < dof; ++i) {
        xi(i) = zsym(Role::Zdot, i + 1);
        xi(dof + i) = zsym(Role::Zbardot, i + 1);
    }
    return xi;
}

ExprVector liouville(int dof) { return apply_J(semispray(dof)); }

Expression liouville_derivative(const Expression& L, int dof) {
    ExprVector V = liouville(dof);
    Expression out;
    for (int i = 0; i < dof; ++i) {
        out += V(i) * partial(L, Symbol::coordinate(Role::Z, i + 1));
        out += V(dof + i) * partial(L, Symbol::coordinate(Role::Zbar, i + 1));
    }
    return out;
}

Expression paper_energy(const Expression& L, int dof) {
    Expression out = -simplify(L);
    for (int i = 1; i <= dof; ++i) {
        out += imaginary() * zsym(Role::Zdot, i) * partial(L, Symbol::coordinate(Role::Z, i));
        out -= imaginary() * zsym(Role::Zbardot, i) * partial(L, Symbol::coordinate(Role::Zbar, i));
    }
    return out;
}

Expression classical_energy(const Expression& L, int dof) {
    Expression out = -simplify(L);
    for (int i = 1; i <= dof; ++i) {
        out += zsym(Role::Zdot, i) * partial(L, Symbol::coordinate(Role::Zdot, i));
        out += zsym(Role::Zbardot, i) * partial(L, Symbol::coordinate(Role::Zbardot, i));
    }
    return out;
}

ExprVector energy_differential(const Expression& E, int dof) {
    ExprVector d(2 * dof);
    for (int j = 0; j < dof; ++j) {
        d(j) = partial(E, Symbol::coordinate(Role::Z, j + 1));
        d(dof + j) = partial(E, Symbol::coordinate(Role::Zbar, j + 1));
    }
    return d;
}

ExprVector interior_product(const KaehlerData& k, const ExprVector& xi) {
    check_tangent(k, xi);
    ExprMatrix W = kaehler_form(k);
    ExprVector out(2 * k.dof);
    for (int b = 0; b < 2 * k.dof; ++b) {
        std::vector<Expression> terms;
        for (int a = 0; a < 2 * k.dof; ++a) terms.push_back(xi(a) * W(a, b));
        out(b) = add(std::move(terms));
    }
    return out;
}

ExprVector interior_product_termwise(const KaehlerData& k, const ExprVector& xi) {
    check_tangent(k, xi);
    const int n = k.dof;
    const Expression I = imaginary();
    auto x = [&](int i) { return xi(i); };
    auto xb = [&](int i) { return xi(n + i); };
    // d^2L/da^j db^i as stored in the blocks: H_ab(i, j)
    auto Lzz = [&](int j, int i) { return k.H_zz(i, j); };     // d^2L/dz^j dz^i
    auto Lzbz = [&](int j, int i) { return k.H_zbz(i, j); };   // d^2L/dzb^j dz^i
    auto Lzzb = [&](int j, int i) { return k.H_zzb(i, j); };   // d^2L/dz^j dzb^i
    auto Lzbzb = [&](int j, int i) { return k.H_zbzb(i, j); }; // d^2L/dzb^j dzb^i

    std::vector<std::vector<Expression>> dz(n), dzb(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            dz[j].push_back(I * x(i) * Lzz(j, i));
            dzb[j].push_back(I * x(i) * Lzbz(j, i));
            dzb[i].push_back(I * x(i) * Lzzb(j, i));
            dzb[j].push_back(-(I * xb(i) * Lzbzb(j, i)));
        }
        // delta terms, j = i
        dz[i].push_back(-(I * x(i) * Lzz(i, i)));
        dz[i].push_back(-(I * xb(i) * Lzbz(i, i)));
        dz[i].push_back(-(I * xb(i) * Lzzb(i, i)));
        dzb[i].push_back(I * xb(i) * Lzbzb(i, i));
    }
    ExprVector out(2 * n);
    for (int j = 0; j < n; ++j) {
        out(j) = add(std::move(dz[j]));
        out(n + j) = add(std::move(dzb[j]));
    }
    return out;
}

ExprVector motion_form_termwise(const Expression& L, int dof) {
    const int n = dof;
    const Expression I = imaginary();
    ExprVector out(2 * n);
    for (int j = 1; j <= n; ++j) {
        Symbol zj = Symbol::coordinate(Role::Z, j), zbj = Symbol::coordinate(Role::Zbar, j);
        Symbol zdj = Symbol::coordinate(Role::Zdot, j);
        Expression dLdz = partial(L, zj);
        Expression dLdzd = partial(L, zdj);
        std::vector<Expression> first, second;
        for (int i = 1; i <= n; ++i) {
            Symbol zi = Symbol::coordinate(Role::Z, i), zbi = Symbol::coordinate(Role::Zbar, i);
            first.push_back(zsym(Role::Zdot, i) * partial(partial(L, zi), zj));
            first.push_back(zsym(Role::Zbardot, i) * partial(partial(L, zi), zbj));
            second.push_back(zsym(Role::Zdot, i) * partial(dLdzd, zi));
            second.push_back(zsym(Role::Zbardot, i) * partial(dLdzd, zbi));
        }
        out(j - 1) = dLdz - I * add(std::move(first));
        out(n + j - 1) = dLdzd + I * add(std::move(second));
    }
    return out;
}

ExprVector dynamics_residual(const Expression& L, int dof) {
    KaehlerData k = kaehler_data(L, dof);
    ExprVector r(2 * dof);
    for (int a = 0; a < 2 * dof; ++a) r(a) = k.i_xi_PhiL(a) - k.dEL(a);
    return r;
}

double third_partial_asymmetry(const Expression& L, int dof, const std::vector<Point>& points) {
    std::vector<Symbol> vars;
    for (int i = 1; i <= dof; ++i) {
        vars.push_back(Symbol::coordinate(Role::Z, i));
        vars.push_back(Symbol::coordinate(Role::Zbar, i));
    }
    double worst = 0.0;
    for (const auto& a : vars) {
        Expression La = partial(L, a);
        for (const auto& b : vars) {
            Expression Lab = partial(La, b);
            Expression Lb = partial(L, b);
            for (const auto& c : vars) {
                Expression abc = partial(Lab, c);
                Expression cba = partial(partial(partial(L, c), b), a);
                Expression bca = partial(partial(Lb, c), a);
                for (const auto& p : points) {
                    Complex v = eval(abc, p);
                    worst = std::max({worst, relative_deviation(v, eval(cba, p)), relative_deviation(v, eval(bca, p))});
                }
            }
        }
    }
    return worst;
}

}  // namespace complag
