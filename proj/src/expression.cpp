#include "complag/expression.hpp"

#include "complag/error.hpp"

#include <ostream>

namespace complag {

bool ComplexRational::is_integer() const {
    return im == 0 && boost::multiprecision::denominator(re) == 1;
}

long long ComplexRational::to_integer() const {
    return boost::multiprecision::numerator(re).convert_to<long long>();
}

Complex ComplexRational::to_complex() const {
    return {re.convert_to<double>(), im.convert_to<double>()};
}

ComplexRational operator+(const ComplexRational& a, const ComplexRational& b) {
    return {a.re + b.re, a.im + b.im};
}

ComplexRational operator-(const ComplexRational& a, const ComplexRational& b) {
    return {a.re - b.re, a.im - b.im};
}

ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
    if (a.im == 0 && b.im == 0) return {a.re * b.re, 0};
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

ComplexRational operator/(const ComplexRational& a, const ComplexRational& b) {
    if (b.is_zero()) throw DivisionByZero();
    if (b.im == 0) return {a.re / b.re, a.im / b.re};
    Rational norm = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / norm, (a.im * b.re - a.re * b.im) / norm};
}

ComplexRational ipow(const ComplexRational& base, long long exponent) {
    if (exponent < 0) return ComplexRational(1) / ipow(base, -exponent);
    ComplexRational result(1);
    ComplexRational square = base;
    while (exponent > 0) {
        if (exponent & 1) result = result * square;
        exponent >>= 1;
        if (exponent) square = square * square;
    }
    return result;
}

const char* role_prefix(Role role) {
    switch (role) {
        case Role::Z: return "z";
        case Role::Zbar: return "zb";
        case Role::Zdot: return "zd";
        case Role::Zbardot: return "zbd";
        case Role::Zddot: return "zdd";
        case Role::Zbarddot: return "zbdd";
        case Role::X: return "x";
        case Role::Y: return "y";
        case Role::Xdot: return "xd";
        case Role::Ydot: return "yd";
        case Role::Xddot: return "xdd";
        case Role::Yddot: return "ydd";
    }
    return "?";
}

Role conjugate_role(Role role) {
    switch (role) {
        case Role::Z: return Role::Zbar;
        case Role::Zbar: return Role::Z;
        case Role::Zdot: return Role::Zbardot;
        case Role::Zbardot: return Role::Zdot;
        case Role::Zddot: return Role::Zbarddot;
        case Role::Zbarddot: return Role::Zddot;
        default: return role;
    }
}

std::string Symbol::to_string() const {
    switch (kind_) {
        case Kind::Parameter: return name_;
        case Kind::Coordinate: return role_prefix(role_) + std::to_string(index_);
        case Kind::Time: return "t";
    }
    return "?";
}

std::ostream& operator<<(std::ostream& os, const Symbol& s) { return os << s.to_string(); }

const char* function_name(Function f) {
    switch (f) {
        case Function::Sqrt: return "sqrt";
        case Function::Sin: return "sin";
        case Function::Cos: return "cos";
        case Function::Exp: return "exp";
        case Function::Ln: return "ln";
    }
    return "?";
}

struct Expression::Node {
    Kind kind;
    ComplexRational value;
    Symbol symbol = Symbol::time();
    Function function = Function::Sqrt;
    std::vector<Expression> children;
};

Expression::Expression() : Expression(ComplexRational(0)) {}

Expression::Expression(const ComplexRational& value) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::Constant;
    node->value = value;
    node_ = std::move(node);
}

Expression::Expression(const Symbol& s) {
    auto node = std::make_shared<Node>();
    switch (s.kind()) {
        case Symbol::Kind::Parameter: node->kind = Kind::Parameter; break;
        case Symbol::Kind::Coordinate: node->kind = Kind::Coordinate; break;
        case Symbol::Kind::Time: node->kind = Kind::Time; break;
    }
    node->symbol = s;
    node_ = std::move(node);
}

Expression Expression::make(Kind kind, std::vector<Expression> children) {
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->children = std::move(children);
    return Expression(std::shared_ptr<const Node>(std::move(node)));
}

Expression Expression::imaginary_unit() { return make(Kind::ImaginaryUnit, {}); }
Expression Expression::raw_sum(std::vector<Expression> terms) { return make(Kind::Sum, std::move(terms)); }
Expression Expression::raw_product(std::vector<Expression> factors) { return make(Kind::Product, std::move(factors)); }
Expression Expression::raw_power(Expression base, Expression exponent) {
    return make(Kind::Power, {std::move(base), std::move(exponent)});
}
Expression Expression::raw_quotient(Expression numerator, Expression denominator) {
    return make(Kind::Quotient, {std::move(numerator), std::move(denominator)});
}
Expression Expression::raw_negation(Expression operand) { return make(Kind::Negation, {std::move(operand)}); }
Expression Expression::raw_conjugate(Expression operand) { return make(Kind::Conjugate, {std::move(operand)}); }

Expression Expression::raw_function(Function f, Expression argument) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::Function;
    node->function = f;
    node->children = {std::move(argument)};
    return Expression(std::shared_ptr<const Node>(std::move(node)));
}

Kind Expression::kind() const noexcept { return node_->kind; }
const ComplexRational& Expression::value() const noexcept { return node_->value; }
const Symbol& Expression::symbol() const noexcept { return node_->symbol; }
Function Expression::function() const noexcept { return node_->function; }
std::span<const Expression> Expression::children() const noexcept { return node_->children; }

bool Expression::is_symbol() const noexcept {
    auto k = kind();
    return k == Kind::Parameter || k == Kind::Coordinate || k == Kind::Time;
}

std::size_t Expression::tree_size() const {
    std::size_t n = 1;
    for (const auto& c : children()) n += c.tree_size();
    return n;
}

namespace {

int compare_rational(const Rational& a, const Rational& b) { return a < b ? -1 : (b < a ? 1 : 0); }

}  // namespace

int compare(const Expression& a, const Expression& b) {
    if (a.same_node(b)) return 0;
    if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
    switch (a.kind()) {
        case Kind::Constant: {
            if (int c = compare_rational(a.value().re, b.value().re)) return c;
            return compare_rational(a.value().im, b.value().im);
        }
        case Kind::ImaginaryUnit: return 0;
        case Kind::Parameter:
        case Kind::Coordinate:
        case Kind::Time: {
            auto c = a.symbol() <=> b.symbol();
            return c < 0 ? -1 : (c > 0 ? 1 : 0);
        }
        case Kind::Function:
            if (a.function() != b.function()) return a.function() < b.function() ? -1 : 1;
            break;
        default: break;
    }
    auto ca = a.children();
    auto cb = b.children();
    std::size_t n = std::min(ca.size(), cb.size());
    for (std::size_t k = 0; k < n; ++k) {
        if (int c = compare(ca[k], cb[k])) return c;
    }
    if (ca.size() != cb.size()) return ca.size() < cb.size() ? -1 : 1;
    return 0;
}

}  // namespace complag
