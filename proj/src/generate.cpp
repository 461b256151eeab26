#include "complag/generate.hpp"

#include "complag/algebra.hpp"
#include "complag/error.hpp"

namespace complag {

namespace {

class Generator {
public:
    Generator(std::mt19937_64& rng, const RandomTreeOptions& o) : rng_(rng), o_(o) {}

    Expression tree(int depth) {
        if (depth <= 0 || pick(10) < 3) return leaf();
        int choices = 4 + (o_.functions ? 1 : 0) + (o_.conjugation ? 1 : 0) + (o_.raw_nodes ? 2 : 0);
        int c = pick(choices);
        if (c < 2) {
            std::vector<Expression> parts;
            int k = 2 + pick(2);
            for (int j = 0; j < k; ++j) parts.push_back(tree(depth - 1));
            return c == 0 ? Expression::raw_sum(std::move(parts)) : Expression::raw_product(std::move(parts));
        }
        if (c < 4) return Expression::raw_power(tree(depth - 1), exponent());
        c -= 4;
        if (o_.functions && c-- == 0) {
            static const Function fs[] = {Function::Sin, Function::Cos, Function::Exp, Function::Sqrt};
            return Expression::raw_function(fs[pick(o_.half_powers ? 4 : 3)], tree(depth - 1));
        }
        if (o_.conjugation && c-- == 0) return Expression::raw_conjugate(tree(depth - 1));
        if (c == 0) return Expression::raw_negation(tree(depth - 1));
        return Expression::raw_quotient(tree(depth - 1), nonzero_leaf());
    }

private:
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

    Expression exponent() {
        int c = pick(o_.half_powers ? 6 : 4);
        switch (c) {
            case 0: return Expression::integer(2);
            case 1: return Expression::integer(3);
            case 2: return Expression::integer(-1);
            case 3: return Expression::integer(-2);
            case 4: return Expression::fraction(1, 2);
            default: return Expression::fraction(-1, 2);
        }
    }

    Expression symbol() {
        static const Role roles[] = {Role::Z, Role::Zbar, Role::Zdot, Role::Zbardot};
        int c = pick(10);
        if (c < 7) return Expression(Symbol::coordinate(roles[pick(4)], 1 + pick(o_.dof)));
        if (c < 9 && !o_.parameters.empty()) {
            return Expression(Symbol::parameter(o_.parameters[pick(static_cast<int>(o_.parameters.size()))]));
        }
        return Expression(Symbol::time());
    }

    Expression nonzero_leaf() {
        if (pick(3) == 0) return Expression::fraction(1 + pick(5), 1 + pick(3));
        return symbol();
    }

    Expression leaf() {
        int c = pick(10);
        if (c < 6) return symbol();
        if (c < 9) {
            int num = pick(11) - 5;
            int den = 1 + pick(4);
            if (pick(3) == 0) return Expression(ComplexRational(Rational(num, den), Rational(pick(5) - 2, 1 + pick(2))));
            return Expression::fraction(num, den);
        }
        return Expression::imaginary_unit();
    }

    std::mt19937_64& rng_;
    const RandomTreeOptions& o_;
};

}  // namespace

Expression random_expression(std::mt19937_64& rng, const RandomTreeOptions& options) {
    Generator g(rng, options);
    return g.tree(options.max_depth);
}

Expression random_canonical_expression(std::mt19937_64& rng, const RandomTreeOptions& options) {
    for (;;) {
        Expression e = random_expression(rng, options);
        try {
            return simplify(e);
        } catch (const DivisionByZero&) {
        }
    }
}

}  // namespace complag
