#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace complag {

using Rational = boost::multiprecision::cpp_rational;
using Complex = std::complex<double>;

/// Exact complex constant re + im*I with rational parts.
struct ComplexRational {
    Rational re;
    Rational im;

    ComplexRational() = default;
    ComplexRational(Rational real, Rational imag = 0) : re(std::move(real)), im(std::move(imag)) {}
    ComplexRational(long long real) : re(real), im(0) {}

    static ComplexRational fraction(long long num, long long den) { return {Rational(num, den), 0}; }
    static ComplexRational i() { return {0, 1}; }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_one() const { return re == 1 && im == 0; }
    bool is_real() const { return im == 0; }
    bool is_integer() const;
    /// Reads the value as a machine integer; valid only when is_integer().
    long long to_integer() const;

    ComplexRational conj() const { return {re, -im}; }
    Complex to_complex() const;

    friend ComplexRational operator+(const ComplexRational& a, const ComplexRational& b);
    friend ComplexRational operator-(const ComplexRational& a, const ComplexRational& b);
    friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b);
    /// Throws DivisionByZero.
    friend ComplexRational operator/(const ComplexRational& a, const ComplexRational& b);
    friend ComplexRational operator-(const ComplexRational& a) { return {-a.re, -a.im}; }
    friend bool operator==(const ComplexRational& a, const ComplexRational& b) = default;
};

/// Integer power by repeated squaring; negative exponents invert (DivisionByZero on 0).
ComplexRational ipow(const ComplexRational& base, long long exponent);

/// The role a coordinate symbol plays on the chart.  Z..Zbarddot are the
/// complex coordinates and their time derivatives; X..Yddot are the real
/// chart z = x + I*y.
enum class Role : std::uint8_t { Z, Zbar, Zdot, Zbardot, Zddot, Zbarddot, X, Y, Xdot, Ydot, Xddot, Yddot };

/// Name prefix used in the surface syntax ("z", "zb", "zd", ...).
const char* role_prefix(Role role);

/// Formal conjugate of a role: swaps barred and unbarred families, fixes real roles.
Role conjugate_role(Role role);

class Symbol {
public:
    enum class Kind : std::uint8_t { Parameter, Coordinate, Time };

    static Symbol parameter(std::string name) { return Symbol(Kind::Parameter, Role::Z, 0, std::move(name)); }
    static Symbol coordinate(Role role, int index) { return Symbol(Kind::Coordinate, role, index, {}); }
    static Symbol time() { return Symbol(Kind::Time, Role::Z, 0, {}); }

    Kind kind() const noexcept { return kind_; }
    Role role() const noexcept { return role_; }
    int index() const noexcept { return index_; }
    const std::string& name() const noexcept { return name_; }

    bool is_parameter() const noexcept { return kind_ == Kind::Parameter; }
    bool is_coordinate() const noexcept { return kind_ == Kind::Coordinate; }
    bool is_time() const noexcept { return kind_ == Kind::Time; }

    std::string to_string() const;

    friend bool operator==(const Symbol&, const Symbol&) = default;
    friend std::strong_ordering operator<=>(const Symbol&, const Symbol&) = default;

private:
    Symbol(Kind kind, Role role, int index, std::string name)
        : kind_(kind), name_(std::move(name)), role_(role), index_(index) {}

    // Declaration order fixes the ordering: parameters (by name) < coordinates
    // (by role, then index) < t.
    Kind kind_;
    std::string name_;
    Role role_;
    int index_;
};

std::ostream& operator<<(std::ostream& os, const Symbol& s);

// Convenience constructors for chart symbols.
inline Symbol z(int i) { return Symbol::coordinate(Role::Z, i); }
inline Symbol zbar(int i) { return Symbol::coordinate(Role::Zbar, i); }
inline Symbol zdot(int i) { return Symbol::coordinate(Role::Zdot, i); }
inline Symbol zbardot(int i) { return Symbol::coordinate(Role::Zbardot, i); }
inline Symbol zddot(int i) { return Symbol::coordinate(Role::Zddot, i); }
inline Symbol zbarddot(int i) { return Symbol::coordinate(Role::Zbarddot, i); }

enum class Function : std::uint8_t { Sqrt, Sin, Cos, Exp, Ln };

const char* function_name(Function f);

/// Node kinds.  The enumerator order is the canonical rank order between
/// kinds.  Canonical forms only use Constant, Parameter, Coordinate, Time,
/// Sum, Product, Power and Function (without Sqrt); the remaining kinds are
/// produced by the parser and removed by simplify().
enum class Kind : std::uint8_t {
    Constant,
    ImaginaryUnit,
    Parameter,
    Coordinate,
    Time,
    Sum,
    Product,
    Power,
    Function,
    Quotient,
    Negation,
    Conjugate,
};

/// Immutable, shared expression tree.  Copies are cheap (reference counted).
class Expression {
public:
    /// The constant 0.
    Expression();
    explicit Expression(const ComplexRational& value);
    explicit Expression(long long value) : Expression(ComplexRational(value)) {}
    explicit Expression(int value) : Expression(ComplexRational(value)) {}
    explicit Expression(const Symbol& symbol);

    static Expression constant(const ComplexRational& value) { return Expression(value); }
    static Expression integer(long long value) { return Expression(ComplexRational(value)); }
    static Expression fraction(long long num, long long den) { return Expression(ComplexRational::fraction(num, den)); }
    static Expression symbol(const Symbol& s) { return Expression(s); }

    // Raw (non-canonical) constructors.  The parser uses these so that the
    // tree mirrors the input text; simplify() normalizes them.
    static Expression imaginary_unit();
    static Expression raw_sum(std::vector<Expression> terms);
    static Expression raw_product(std::vector<Expression> factors);
    static Expression raw_power(Expression base, Expression exponent);
    static Expression raw_quotient(Expression numerator, Expression denominator);
    static Expression raw_negation(Expression operand);
    static Expression raw_function(Function f, Expression argument);
    static Expression raw_conjugate(Expression operand);

    Kind kind() const noexcept;
    /// Constant value; only meaningful for Kind::Constant.
    const ComplexRational& value() const noexcept;
    /// Symbol; only meaningful for Parameter, Coordinate and Time.
    const Symbol& symbol() const noexcept;
    Function function() const noexcept;
    std::span<const Expression> children() const noexcept;
    const Expression& child(std::size_t k) const noexcept { return children()[k]; }
    std::size_t size() const noexcept { return children().size(); }

    bool is_constant() const noexcept { return kind() == Kind::Constant; }
    bool is_symbol() const noexcept;
    bool is_zero() const noexcept { return is_constant() && value().is_zero(); }
    bool is_one() const noexcept { return is_constant() && value().is_one(); }
    bool is_integer() const noexcept { return is_constant() && value().is_integer(); }

    /// Node count of the tree.
    std::size_t tree_size() const;

    bool same_node(const Expression& other) const noexcept { return node_ == other.node_; }
    /// Identity of the shared node, for memoizing traversals of DAG-shaped trees.
    const void* id() const noexcept { return node_.get(); }

private:
    struct Node;
    explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static Expression make(Kind kind, std::vector<Expression> children);

    std::shared_ptr<const Node> node_;
};

/// Canonical total order on trees: constants < I < parameters (by name) <
/// coordinates (by role, then index) < t < composite nodes (by kind, then
/// children lexicographically, then arity).  Returns <0, 0 or >0.
int compare(const Expression& a, const Expression& b);

inline bool operator==(const Expression& a, const Expression& b) { return compare(a, b) == 0; }
inline bool operator<(const Expression& a, const Expression& b) { return compare(a, b) < 0; }

struct ExpressionLess {
    bool operator()(const Expression& a, const Expression& b) const { return compare(a, b) < 0; }
};

}  // namespace complag
