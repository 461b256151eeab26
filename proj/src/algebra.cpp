#include "complag/algebra.hpp"

#include "complag/error.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace complag {

namespace {

// Keyed by node identity.  The key expression is stored alongside the value
// so a node cannot be freed (and its address reused) while memoized.
using Memo = std::unordered_map<const void*, std::pair<Expression, Expression>>;

// Largest integer exponent folded exactly for constant bases.
constexpr long long kMaxFoldedExponent = 1024;

Expression scale(const Expression& rest, const ComplexRational& c) {
    if (c.is_one()) return rest;
    std::vector<Expression> factors{Expression(c)};
    if (rest.kind() == Kind::Product) {
        factors.insert(factors.end(), rest.children().begin(), rest.children().end());
    } else {
        factors.push_back(rest);
    }
    return Expression::raw_product(std::move(factors));
}

// Sums are stored with a unit leading coefficient wherever the scale can move
// into a coefficient, so c*S and S share one representation.
ComplexRational leading_coefficient(const Expression& sum) {
    const Expression& first = sum.child(0);
    if (first.is_constant()) return first.value();
    if (first.kind() == Kind::Product && first.child(0).is_constant()) return first.child(0).value();
    return ComplexRational(1);
}

Expression divide_terms(const Expression& sum, const ComplexRational& c) {
    ComplexRational inv = ComplexRational(1) / c;
    std::vector<Expression> terms;
    terms.reserve(sum.size());
    for (const auto& t : sum.children()) {
        auto [k, rest] = split_coefficient(t);
        terms.push_back(t.is_constant() ? Expression(k * inv) : scale(rest, k * inv));
    }
    return Expression::raw_sum(std::move(terms));
}

}  // namespace

std::pair<ComplexRational, Expression> split_coefficient(const Expression& term) {
    if (term.is_constant()) return {term.value(), Expression::integer(1)};
    if (term.kind() == Kind::Product && term.child(0).is_constant()) {
        auto rest = term.children().subspan(1);
        if (rest.size() == 1) return {term.child(0).value(), rest[0]};
        return {term.child(0).value(), Expression::raw_product({rest.begin(), rest.end()})};
    }
    return {ComplexRational(1), term};
}

Expression add(std::vector<Expression> terms) {
    for (;;) {
        ComplexRational constant(0);
        std::map<Expression, ComplexRational, ExpressionLess> collected;
        auto push = [&](const Expression& t) {
            if (t.is_constant()) {
                constant = constant + t.value();
                return;
            }
            auto [c, rest] = split_coefficient(t);
            auto [it, inserted] = collected.try_emplace(rest, c);
            if (!inserted) it->second = it->second + c;
        };
        for (const auto& t : terms) {
            if (t.kind() == Kind::Sum) {
                for (const auto& c : t.children()) push(c);
            } else {
                push(t);
            }
        }

        std::vector<Expression> out;
        bool nested = false;
        if (!constant.is_zero()) out.emplace_back(constant);
        for (const auto& [rest, c] : collected) {
            if (c.is_zero()) continue;
            Expression term = scale(rest, c);
            nested = nested || term.kind() == Kind::Sum;
            out.push_back(std::move(term));
        }
        if (nested) {
            terms = std::move(out);
            continue;
        }
        if (out.empty()) return Expression();
        if (out.size() == 1) return out.front();
        return Expression::raw_sum(std::move(out));
    }
}

Expression mul(std::vector<Expression> factors) {
    for (int round = 0;; ++round) {
        ComplexRational coeff(1);
        std::map<Expression, std::vector<Expression>, ExpressionLess> groups;
        auto push = [&](const Expression& f) {
            if (f.is_constant()) {
                coeff = coeff * f.value();
            } else if (f.kind() == Kind::Sum && !leading_coefficient(f).is_one()) {
                ComplexRational c = leading_coefficient(f);
                coeff = coeff * c;
                groups[divide_terms(f, c)].push_back(Expression::integer(1));
            } else if (f.kind() == Kind::Power) {
                groups[f.child(0)].push_back(f.child(1));
            } else {
                groups[f].push_back(Expression::integer(1));
            }
        };
        for (const auto& f : factors) {
            if (f.kind() == Kind::Product) {
                for (const auto& c : f.children()) push(c);
            } else {
                push(f);
            }
        }
        if (coeff.is_zero()) return Expression();

        std::vector<Expression> out;
        bool again = false;
        for (const auto& [base, exponents] : groups) {
            Expression exponent = exponents.size() == 1 ? exponents.front() : add(exponents);
            Expression p = power(base, exponent);
            if (p.is_constant()) {
                coeff = coeff * p.value();
                if (coeff.is_zero()) return Expression();
                continue;
            }
            if (p.kind() == Kind::Product) {
                again = true;
            } else {
                const Expression& new_base = p.kind() == Kind::Power ? p.child(0) : p;
                again = again || compare(new_base, base) != 0;
            }
            out.push_back(std::move(p));
        }
        if (again && round < 64) {
            out.emplace_back(coeff);
            factors = std::move(out);
            continue;
        }

        std::sort(out.begin(), out.end(), ExpressionLess{});
        if (out.empty()) return Expression(coeff);
        // A constant times a single sum is distributed.
        if (out.size() == 1 && out.front().kind() == Kind::Sum) {
            if (coeff.is_one()) return out.front();
            std::vector<Expression> terms;
            for (const auto& t : out.front().children()) {
                auto [c, rest] = split_coefficient(t);
                terms.push_back(t.is_constant() ? Expression(c * coeff) : scale(rest, c * coeff));
            }
            return add(std::move(terms));
        }
        if (coeff.is_one() && out.size() == 1) return out.front();
        if (!coeff.is_one()) out.insert(out.begin(), Expression(coeff));
        return Expression::raw_product(std::move(out));
    }
}

Expression power(const Expression& base, const Expression& exponent) {
    if (exponent.is_zero()) return Expression::integer(1);
    if (exponent.is_one()) return base;
    if (base.is_one()) return Expression::integer(1);
    if (base.is_constant() && exponent.is_integer()) {
        const Rational& n = exponent.value().re;
        bool small = n <= kMaxFoldedExponent && n >= -kMaxFoldedExponent;
        if (small && !(base.is_zero() && n < 0)) return Expression(ipow(base.value(), exponent.value().to_integer()));
    }
    if (base.is_zero() && exponent.is_constant()) {
        if (exponent.value().re > 0) return Expression();
        throw DivisionByZero();
    }
    if (exponent.is_integer()) {
        const Rational& n = exponent.value().re;
        if (base.kind() == Kind::Sum && !leading_coefficient(base).is_one() && n <= kMaxFoldedExponent &&
            n >= -kMaxFoldedExponent) {
            ComplexRational c = leading_coefficient(base);
            return mul({Expression(ipow(c, exponent.value().to_integer())), power(divide_terms(base, c), exponent)});
        }
        if (base.kind() == Kind::Power) return power(base.child(0), mul({base.child(1), exponent}));
        if (base.kind() == Kind::Product) {
            std::vector<Expression> factors;
            factors.reserve(base.size());
            for (const auto& f : base.children()) factors.push_back(power(f, exponent));
            return mul(std::move(factors));
        }
    }
    return Expression::raw_power(base, exponent);
}

Expression apply(Function f, const Expression& argument) {
    if (f == Function::Sqrt) return power(argument, Expression::fraction(1, 2));
    if (argument.is_zero()) {
        switch (f) {
            case Function::Sin: return Expression();
            case Function::Cos:
            case Function::Exp: return Expression::integer(1);
            default: break;
        }
    }
    if (f == Function::Ln && argument.is_one()) return Expression();
    return Expression::raw_function(f, argument);
}

namespace {

Expression conjugate_canonical(const Expression& e, Memo& memo);

Expression simplify_impl(const Expression& e, Memo& memo) {
    if (auto it = memo.find(e.id()); it != memo.end()) return it->second.second;
    auto simplified_children = [&] {
        std::vector<Expression> out;
        out.reserve(e.size());
        for (const auto& c : e.children()) out.push_back(simplify_impl(c, memo));
        return out;
    };
    Expression result;
    switch (e.kind()) {
        case Kind::Constant:
        case Kind::Parameter:
        case Kind::Coordinate:
        case Kind::Time: result = e; break;
        case Kind::ImaginaryUnit: result = imaginary(); break;
        case Kind::Sum: result = add(simplified_children()); break;
        case Kind::Product: result = mul(simplified_children()); break;
        case Kind::Power: {
            auto c = simplified_children();
            result = power(c[0], c[1]);
            break;
        }
        case Kind::Quotient: {
            auto c = simplified_children();
            result = mul({c[0], power(c[1], Expression::integer(-1))});
            break;
        }
        case Kind::Negation: result = mul({Expression::integer(-1), simplify_impl(e.child(0), memo)}); break;
        case Kind::Function: result = apply(e.function(), simplify_impl(e.child(0), memo)); break;
        case Kind::Conjugate: {
            Memo conj_memo;
            result = conjugate_canonical(simplify_impl(e.child(0), memo), conj_memo);
            break;
        }
    }
    memo.emplace(e.id(), std::pair{e, result});
    return result;
}

Expression conjugate_canonical(const Expression& e, Memo& memo) {
    if (auto it = memo.find(e.id()); it != memo.end()) return it->second.second;
    auto mapped = [&] {
        std::vector<Expression> out;
        out.reserve(e.size());
        for (const auto& c : e.children()) out.push_back(conjugate_canonical(c, memo));
        return out;
    };
    Expression result;
    switch (e.kind()) {
        case Kind::Constant: result = Expression(e.value().conj()); break;
        case Kind::Coordinate:
            result = Expression(Symbol::coordinate(conjugate_role(e.symbol().role()), e.symbol().index()));
            break;
        case Kind::Parameter:
        case Kind::Time: result = e; break;
        case Kind::Sum: result = add(mapped()); break;
        case Kind::Product: result = mul(mapped()); break;
        case Kind::Power: {
            auto c = mapped();
            result = power(c[0], c[1]);
            break;
        }
        case Kind::Function: result = apply(e.function(), conjugate_canonical(e.child(0), memo)); break;
        default: result = conjugate_canonical(simplify(e), memo); break;
    }
    memo.emplace(e.id(), std::pair{e, result});
    return result;
}

Expression rebuild(const Expression& e, std::vector<Expression> children) {
    switch (e.kind()) {
        case Kind::Sum: return add(std::move(children));
        case Kind::Product: return mul(std::move(children));
        case Kind::Power: return power(children[0], children[1]);
        case Kind::Function: return apply(e.function(), children[0]);
        default: return e;
    }
}

Expression substitute_impl(const Expression& e, const Binding& binding, Memo& memo) {
    if (auto it = memo.find(e.id()); it != memo.end()) return it->second.second;
    Expression result;
    if (e.is_symbol()) {
        auto it = binding.find(e.symbol());
        result = it == binding.end() ? e : it->second;
    } else if (e.size() == 0) {
        result = e;
    } else {
        std::vector<Expression> children;
        children.reserve(e.size());
        for (const auto& c : e.children()) children.push_back(substitute_impl(c, binding, memo));
        result = rebuild(e, std::move(children));
    }
    memo.emplace(e.id(), std::pair{e, result});
    return result;
}

Expression multiply_out(const Expression& a, const Expression& b) {
    auto terms_of = [](const Expression& x) {
        if (x.kind() == Kind::Sum) return std::vector<Expression>(x.children().begin(), x.children().end());
        return std::vector<Expression>{x};
    };
    std::vector<Expression> out;
    for (const auto& s : terms_of(a)) {
        for (const auto& u : terms_of(b)) out.push_back(mul({s, u}));
    }
    return add(std::move(out));
}

Expression expand_impl(const Expression& e, Memo& memo) {
    if (auto it = memo.find(e.id()); it != memo.end()) return it->second.second;
    Expression result;
    switch (e.kind()) {
        case Kind::Sum: {
            std::vector<Expression> terms;
            for (const auto& c : e.children()) terms.push_back(expand_impl(c, memo));
            result = add(std::move(terms));
            break;
        }
        case Kind::Product: {
            Expression acc = Expression::integer(1);
            for (const auto& c : e.children()) acc = multiply_out(acc, expand_impl(c, memo));
            result = acc;
            break;
        }
        case Kind::Power: {
            Expression base = expand_impl(e.child(0), memo);
            Expression exponent = expand_impl(e.child(1), memo);
            if (base.kind() == Kind::Sum && exponent.is_integer() && exponent.value().re > 1 &&
                exponent.value().re <= 32) {
                Expression acc = base;
                for (long long k = 1; k < exponent.value().to_integer(); ++k) acc = multiply_out(acc, base);
                result = acc;
            } else {
                result = power(base, exponent);
                if (result.kind() == Kind::Product && compare(result, e) != 0) result = expand_impl(result, memo);
            }
            break;
        }
        case Kind::Function: result = apply(e.function(), expand_impl(e.child(0), memo)); break;
        default: result = e; break;
    }
    memo.emplace(e.id(), std::pair{e, result});
    return result;
}

void collect_symbols(const Expression& e, std::set<Symbol>& out, std::unordered_set<const void*>& seen) {
    if (!seen.insert(e.id()).second) return;
    if (e.is_symbol()) out.insert(e.symbol());
    for (const auto& c : e.children()) collect_symbols(c, out, seen);
}

}  // namespace

Expression simplify(const Expression& e) {
    Memo memo;
    return simplify_impl(e, memo);
}

Expression conjugate(const Expression& e) {
    Memo memo;
    return conjugate_canonical(simplify(e), memo);
}

Expression substitute(const Expression& e, const Binding& binding) {
    Binding canonical;
    for (const auto& [key, value] : binding) {
        if (contains(value, key)) throw CyclicBinding(key.to_string());
        canonical.emplace(key, simplify(value));
    }
    Memo memo;
    return substitute_impl(simplify(e), canonical, memo);
}

Expression expand(const Expression& e) {
    Memo memo;
    return expand_impl(simplify(e), memo);
}

std::set<Symbol> free_symbols(const Expression& e) {
    std::set<Symbol> out;
    std::unordered_set<const void*> seen;
    collect_symbols(e, out, seen);
    return out;
}

bool contains(const Expression& e, const Symbol& s) { return free_symbols(e).count(s) > 0; }

bool is_canonical_kind_set(const Expression& e) {
    switch (e.kind()) {
        case Kind::ImaginaryUnit:
        case Kind::Quotient:
        case Kind::Negation:
        case Kind::Conjugate: return false;
        case Kind::Function:
            if (e.function() == Function::Sqrt) return false;
            break;
        default: break;
    }
    return std::all_of(e.children().begin(), e.children().end(), is_canonical_kind_set);
}

}  // namespace complag
