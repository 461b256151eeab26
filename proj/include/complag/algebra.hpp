#pragma once

#include "complag/expression.hpp"

#include <map>
#include <set>
#include <vector>

namespace complag {

/// Brings a tree to canonical form: sums and products flattened, like terms
/// and like factors collected, constants folded exactly, sqrt stored as a
/// power 1/2, quotients and negations rewritten as products, I folded into
/// constants and conj() pushed down to the leaves.  Idempotent.
Expression simplify(const Expression& e);

// Canonical builders.  Operands must already be canonical; the result is.
Expression add(std::vector<Expression> terms);
Expression mul(std::vector<Expression> factors);
Expression power(const Expression& base, const Expression& exponent);
Expression apply(Function f, const Expression& argument);

inline Expression operator+(const Expression& a, const Expression& b) { return add({a, b}); }
inline Expression operator*(const Expression& a, const Expression& b) { return mul({a, b}); }
inline Expression operator-(const Expression& a) { return mul({Expression::integer(-1), a}); }
inline Expression operator-(const Expression& a, const Expression& b) { return add({a, -b}); }
inline Expression operator/(const Expression& a, const Expression& b) {
    return mul({a, power(b, Expression::integer(-1))});
}
inline Expression& operator+=(Expression& a, const Expression& b) { return a = a + b; }
inline Expression& operator-=(Expression& a, const Expression& b) { return a = a - b; }
inline Expression& operator*=(Expression& a, const Expression& b) { return a = a * b; }
inline Expression& operator/=(Expression& a, const Expression& b) { return a = a / b; }

inline Expression pow(const Expression& base, const Expression& exponent) { return power(base, exponent); }
inline Expression pow(const Expression& base, long long exponent) { return power(base, Expression::integer(exponent)); }
inline Expression sqrt(const Expression& x) { return apply(Function::Sqrt, x); }
inline Expression sin(const Expression& x) { return apply(Function::Sin, x); }
inline Expression cos(const Expression& x) { return apply(Function::Cos, x); }
inline Expression exp(const Expression& x) { return apply(Function::Exp, x); }
inline Expression ln(const Expression& x) { return apply(Function::Ln, x); }

/// The constant I.
inline Expression imaginary() { return Expression(ComplexRational::i()); }

/// Splits a canonical term into its constant coefficient and the rest.
/// A pure constant yields rest == 1.
std::pair<ComplexRational, Expression> split_coefficient(const Expression& term);

using Binding = std::map<Symbol, Expression>;

/// Simultaneous substitution followed by simplify().  Throws CyclicBinding
/// when a bound value mentions its own key.
Expression substitute(const Expression& e, const Binding& binding);

/// Formal conjugation: swaps barred and unbarred coordinate families, maps
/// I to -I and fixes parameters and t (declared real).  Result is canonical.
Expression conjugate(const Expression& e);

/// Distributes products over sums and expands positive integer powers of
/// sums, recursively (also inside function arguments and power bases).
Expression expand(const Expression& e);

std::set<Symbol> free_symbols(const Expression& e);
bool contains(const Expression& e, const Symbol& s);

/// True when the tree uses only node kinds allowed in canonical form.
bool is_canonical_kind_set(const Expression& e);

}  // namespace complag
