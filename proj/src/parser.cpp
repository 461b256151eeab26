#include "complag/parser.hpp"

#include "complag/algebra.hpp"
#include "complag/error.hpp"

#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>

namespace complag {

namespace {

enum class TokenKind { Number, Identifier, Operator, LeftParen, RightParen, End };

struct Token {
    TokenKind kind;
    std::string text;
    std::size_t offset;
    ComplexRational number;
};

const std::vector<std::string> kOperandStart{"number", "identifier", "(", "-"};

/// Exact rational of a decimal literal such as "9.8" or "1.5e-3".
ComplexRational decimal_value(std::string_view text) {
    boost::multiprecision::cpp_int mantissa = 0;
    long long scale = 0;
    std::size_t k = 0;
    bool fraction = false;
    for (; k < text.size(); ++k) {
        char c = text[k];
        if (c == '.') {
            fraction = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            mantissa = mantissa * 10 + (c - '0');
            if (fraction) --scale;
        } else {
            break;
        }
    }
    if (k < text.size() && (text[k] == 'e' || text[k] == 'E')) {
        scale += std::stoll(std::string(text.substr(k + 1)));
    }
    Rational value(mantissa);
    boost::multiprecision::cpp_int ten_power = boost::multiprecision::pow(boost::multiprecision::cpp_int(10),
                                                                         static_cast<unsigned>(std::llabs(scale)));
    value = scale >= 0 ? value * Rational(ten_power) : value / Rational(ten_power);
    return {value, 0};
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> tokens;
        while (true) {
            while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (pos_ >= text_.size()) break;
            char c = text_[pos_];
            std::size_t start = pos_;
            if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && digit_at(pos_ + 1))) {
                tokens.push_back(number());
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                while (pos_ < text_.size() &&
                       (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                    ++pos_;
                tokens.push_back({TokenKind::Identifier, std::string(text_.substr(start, pos_ - start)), start, {}});
            } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
                ++pos_;
                tokens.push_back({TokenKind::Operator, std::string(1, c), start, {}});
            } else if (c == '(') {
                ++pos_;
                tokens.push_back({TokenKind::LeftParen, "(", start, {}});
            } else if (c == ')') {
                ++pos_;
                tokens.push_back({TokenKind::RightParen, ")", start, {}});
            } else {
                throw SyntaxError(std::string("unexpected character '") + c + "'", start,
                                  {"number", "identifier", "operator", "(", ")"});
            }
        }
        tokens.push_back({TokenKind::End, "", text_.size(), {}});
        return tokens;
    }

private:
    bool digit_at(std::size_t k) const {
        return k < text_.size() && std::isdigit(static_cast<unsigned char>(text_[k]));
    }

    Token number() {
        std::size_t start = pos_;
        while (digit_at(pos_)) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (digit_at(pos_)) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t k = pos_ + 1;
            if (k < text_.size() && (text_[k] == '+' || text_[k] == '-')) ++k;
            if (digit_at(k)) {
                pos_ = k;
                while (digit_at(pos_)) ++pos_;
            }
        }
        std::string text(text_.substr(start, pos_ - start));
        return {TokenKind::Number, text, start, decimal_value(text)};
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

std::optional<Symbol> coordinate_symbol(const std::string& name) {
    static const std::regex pattern("^(zbdd|zdd|zbd|zb|zd|z|xdd|ydd|xd|yd|x|y)([1-9][0-9]{0,8})$");
    std::smatch m;
    if (!std::regex_match(name, m, pattern)) return std::nullopt;
    static const std::map<std::string, Role> roles{
        {"z", Role::Z},     {"zb", Role::Zbar},   {"zd", Role::Zdot},   {"zbd", Role::Zbardot},
        {"zdd", Role::Zddot}, {"zbdd", Role::Zbarddot}, {"x", Role::X},  {"y", Role::Y},
        {"xd", Role::Xdot}, {"yd", Role::Ydot},   {"xdd", Role::Xddot}, {"ydd", Role::Yddot},
    };
    return Symbol::coordinate(roles.at(m[1].str()), std::stoi(m[2].str()));
}

std::optional<Function> function_named(const std::string& name) {
    if (name == "sqrt") return Function::Sqrt;
    if (name == "sin") return Function::Sin;
    if (name == "cos") return Function::Cos;
    if (name == "exp") return Function::Exp;
    if (name == "ln") return Function::Ln;
    return std::nullopt;
}

/// Pratt parser over the token stream.
class Parser {
public:
    Parser(std::string_view text, std::vector<Token> tokens) : text_(text), tokens_(std::move(tokens)) {}

    Expression parse() {
        Expression e = expression(0);
        if (peek().kind != TokenKind::End) fail("unexpected '" + peek().text + "'", peek(), {"operator", "end of input"});
        return e;
    }

private:
    // Binding powers.  Left-associative operators bind their right operand one
    // level tighter; '^' is right-associative.
    static constexpr int kSumPower = 10;
    static constexpr int kProductPower = 20;
    static constexpr int kUnaryPower = 30;
    static constexpr int kPowerPower = 40;

    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() { return tokens_[pos_++]; }

    [[noreturn]] void fail(const std::string& message, const Token& at, std::vector<std::string> expected) const {
        std::size_t offset = at.offset;
        if (!text_.empty() && offset >= text_.size()) offset = text_.size() - 1;
        throw SyntaxError(message, offset, std::move(expected));
    }

    void expect_right_paren() {
        if (peek().kind != TokenKind::RightParen) {
            fail(peek().kind == TokenKind::End ? "unexpected end of input" : "unexpected '" + peek().text + "'",
                 peek(), {")", "operator"});
        }
        ++pos_;
    }

    Expression expression(int min_power) {
        Expression lhs = operand();
        while (true) {
            const Token& t = peek();
            if (t.kind == TokenKind::End || t.kind == TokenKind::RightParen) break;
            if (t.kind != TokenKind::Operator) fail("unexpected '" + t.text + "'", t, {"operator", "end of input"});
            char op = t.text[0];
            int left = (op == '+' || op == '-') ? kSumPower : (op == '^' ? kPowerPower : kProductPower);
            if (left < min_power) break;
            ++pos_;
            int right = op == '^' ? kPowerPower : left + 1;
            Expression rhs = expression(right);
            switch (op) {
                case '+': lhs = Expression::raw_sum({lhs, rhs}); break;
                case '-': lhs = Expression::raw_sum({lhs, Expression::raw_negation(rhs)}); break;
                case '*': lhs = Expression::raw_product({lhs, rhs}); break;
                case '/': lhs = Expression::raw_quotient(lhs, rhs); break;
                case '^': lhs = Expression::raw_power(lhs, rhs); break;
            }
        }
        return lhs;
    }

    Expression operand() {
        const Token& t = next();
        switch (t.kind) {
            case TokenKind::Number: return Expression(t.number);
            case TokenKind::LeftParen: {
                Expression inner = expression(0);
                expect_right_paren();
                return inner;
            }
            case TokenKind::Operator:
                if (t.text == "-") return Expression::raw_negation(expression(kUnaryPower));
                if (t.text == "+") return expression(kUnaryPower);
                break;
            case TokenKind::Identifier: return identifier(t);
            default: break;
        }
        --pos_;
        fail(t.kind == TokenKind::End ? "unexpected end of input" : "unexpected '" + t.text + "'", t, kOperandStart);
    }

    Expression identifier(const Token& t) {
        auto f = function_named(t.text);
        if (f || t.text == "conj") {
            if (peek().kind != TokenKind::LeftParen) fail("function '" + t.text + "' needs an argument", peek(), {"("});
            ++pos_;
            Expression argument = expression(0);
            expect_right_paren();
            return f ? Expression::raw_function(*f, argument) : Expression::raw_conjugate(argument);
        }
        if (t.text == "I") return Expression::imaginary_unit();
        if (t.text == "t") return Expression(Symbol::time());
        if (auto s = coordinate_symbol(t.text)) return Expression(*s);
        return Expression(Symbol::parameter(t.text));
    }

    std::string_view text_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Printing

enum Precedence { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

struct Printed {
    std::string text;
    int precedence;
};

std::string wrap(const Printed& p, int required) { return p.precedence < required ? "(" + p.text + ")" : p.text; }

std::string rational_text(const Rational& r) {
    std::ostringstream os;
    os << boost::multiprecision::numerator(r);
    if (boost::multiprecision::denominator(r) != 1) os << "/" << boost::multiprecision::denominator(r);
    return os.str();
}

bool negative_constant(const ComplexRational& c) { return c.re < 0 || (c.re == 0 && c.im < 0); }

bool negative_leading(const Expression& e) {
    if (e.is_constant()) return negative_constant(e.value());
    if (e.kind() == Kind::Product && e.child(0).is_constant()) return negative_constant(e.child(0).value());
    return false;
}

Printed print_constant(const ComplexRational& c) {
    if (c.im == 0) {
        int prec = c.re < 0 ? kUnary : (boost::multiprecision::denominator(c.re) != 1 ? kProduct : kAtom);
        return {rational_text(c.re), prec};
    }
    auto imaginary_text = [](const Rational& im) -> std::string {
        if (im == 1) return "I";
        if (im == -1) return "-I";
        return rational_text(im) + "*I";
    };
    if (c.re == 0) {
        int prec = c.im < 0 ? kUnary : (c.im == 1 ? kAtom : kProduct);
        return {imaginary_text(c.im), prec};
    }
    std::string text = rational_text(c.re);
    text += c.im < 0 ? " - " + imaginary_text(-c.im) : " + " + imaginary_text(c.im);
    return {text, kSum};
}

Printed print(const Expression& e);

Expression negate(const Expression& e) { return mul({Expression::integer(-1), e}); }

/// Factor f printed in a denominator: f has a negative exponent, so print f^-1.
Expression reciprocal(const Expression& f) { return power(f, Expression::integer(-1)); }

bool in_denominator(const Expression& f) {
    return f.kind() == Kind::Power && negative_leading(f.child(1));
}

Printed print_power(const Expression& e) {
    const Expression& base = e.child(0);
    const Expression& exponent = e.child(1);
    if (exponent.is_constant() && exponent.value() == ComplexRational::fraction(1, 2)) {
        return {"sqrt(" + print(base).text + ")", kAtom};
    }
    if (negative_leading(exponent)) return {"1/" + wrap(print(reciprocal(e)), kPower), kProduct};
    return {wrap(print(base), kAtom) + "^" + wrap(print(exponent), kAtom), kPower};
}

Printed print_product(const Expression& e) {
    ComplexRational coeff(1);
    std::vector<Expression> numerator, denominator;
    for (const auto& f : e.children()) {
        if (f.is_constant()) {
            coeff = coeff * f.value();
        } else if (in_denominator(f)) {
            denominator.push_back(reciprocal(f));
        } else {
            numerator.push_back(f);
        }
    }
    std::string sign;
    if (negative_constant(coeff)) {
        sign = "-";
        coeff = -coeff;
    }
    auto join = [](const std::vector<Expression>& fs) {
        std::string out;
        for (const auto& f : fs) out += (out.empty() ? "" : "*") + wrap(print(f), kPower);
        return out;
    };

    std::string head;
    if (coeff.is_real() && !numerator.empty()) {
        if (!coeff.is_one()) head = rational_text(coeff.re) + "*";
        head += join(numerator);
    } else if (coeff.is_real()) {
        // Pure rational over the denominator: fold q into it.
        head = rational_text(Rational(boost::multiprecision::numerator(coeff.re)));
        auto q = boost::multiprecision::denominator(coeff.re);
        if (q != 1) denominator.insert(denominator.begin(), Expression(ComplexRational(Rational(q))));
    } else {
        Printed c = print_constant(coeff);
        head = c.precedence == kSum ? "(" + c.text + ")" : c.text;
        if (!numerator.empty()) head += "*" + join(numerator);
    }

    std::string text = sign + head;
    if (!denominator.empty()) {
        text += "/";
        text += denominator.size() == 1 ? wrap(print(denominator.front()), kPower) : "(" + join(denominator) + ")";
    }
    return {text, kProduct};
}

Printed print_sum(const Expression& e) {
    std::string text;
    bool first = true;
    for (const auto& term : e.children()) {
        bool negative = negative_leading(term);
        Printed p = print(negative ? negate(term) : term);
        if (first) {
            text = (negative ? "-" : "") + wrap(p, kProduct);
        } else {
            text += (negative ? " - " : " + ") + wrap(p, kProduct);
        }
        first = false;
    }
    return {text, kSum};
}

Printed print(const Expression& e) {
    switch (e.kind()) {
        case Kind::Constant: return print_constant(e.value());
        case Kind::Parameter:
        case Kind::Coordinate:
        case Kind::Time: return {e.symbol().to_string(), kAtom};
        case Kind::Sum: return print_sum(e);
        case Kind::Product: return print_product(e);
        case Kind::Power: return print_power(e);
        case Kind::Function: return {std::string(function_name(e.function())) + "(" + print(e.child(0)).text + ")", kAtom};
        default: return print(simplify(e));
    }
}

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

bool valid_identifier(const std::string& s) {
    static const std::regex pattern("^[A-Za-z_][A-Za-z0-9_]*$");
    return std::regex_match(s, pattern);
}

/// Parses an expression embedded in a document, shifting error offsets.
Expression parse_at(const Document::Entry& entry) {
    try {
        return parse_expr(entry.value);
    } catch (const SyntaxError& err) {
        throw SyntaxError(std::string(err.what()), entry.offset + err.offset(), err.expected());
    }
}

void check_indices(const Expression& e, int dof, const std::string& what) {
    for (const auto& s : free_symbols(e)) {
        if (s.is_coordinate() && s.index() > dof) {
            throw IndexOutOfRange(what + " uses " + s.to_string() + " but dof = " + std::to_string(dof));
        }
    }
}

}  // namespace

Expression parse_expr(std::string_view text) {
    Lexer lexer(text);
    Parser parser(text, lexer.run());
    return parser.parse();
}

std::string print_expr(const Expression& e) { return print(simplify(e)).text; }

std::ostream& operator<<(std::ostream& os, const Expression& e) { return os << print_expr(e); }

const Document::Entry* Document::find(std::string_view section, std::string_view key) const {
    for (const auto& entry : entries) {
        if (entry.section == section && entry.key == key) return &entry;
    }
    return nullptr;
}

std::vector<const Document::Entry*> Document::section(std::string_view name) const {
    std::vector<const Entry*> out;
    for (const auto& entry : entries) {
        if (entry.section == name) out.push_back(&entry);
    }
    return out;
}

Document parse_document(std::string_view text) {
    Document doc;
    std::string section;
    std::string pending;
    std::size_t pending_offset = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view raw = text.substr(pos, end - pos);
        std::size_t line_offset = pos;
        pos = end + 1;

        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        std::string line = trim(raw);
        std::size_t lead = raw.find_first_not_of(" \t\r");
        std::size_t content_offset = line_offset + (lead == std::string_view::npos ? 0 : lead);

        bool continues = !line.empty() && line.back() == '\\';
        if (continues) line = trim(std::string_view(line).substr(0, line.size() - 1));
        if (pending.empty()) pending_offset = content_offset;
        if (!pending.empty() && !line.empty()) pending += ' ';
        pending += line;
        if (continues) continue;

        std::string logical = std::move(pending);
        pending.clear();
        if (logical.empty()) {
            if (end >= text.size()) break;
            continue;
        }
        if (logical.front() == '[') {
            if (logical.back() != ']' || logical.size() < 3) {
                throw SyntaxError("malformed section header", pending_offset, {"]"});
            }
            section = trim(std::string_view(logical).substr(1, logical.size() - 2));
        } else if (auto eq = logical.find('='); eq != std::string::npos) {
            std::string key = trim(std::string_view(logical).substr(0, eq));
            std::string value = trim(std::string_view(logical).substr(eq + 1));
            std::size_t value_offset = pending_offset + eq + 1;
            while (value_offset < text.size() && std::isspace(static_cast<unsigned char>(text[value_offset])))
                ++value_offset;
            if (key.empty()) throw SyntaxError("missing key before '='", pending_offset, {"key"});
            doc.entries.push_back({section, key, value, value_offset});
        } else {
            doc.entries.push_back({section, "", logical, pending_offset});
        }
        if (end >= text.size()) break;
    }
    if (!pending.empty()) throw SyntaxError("line continuation at end of input", text.empty() ? 0 : text.size() - 1);
    return doc;
}

Point SystemSpec::parameter_point() const {
    Point p;
    for (const auto& [name, value] : parameters) p[Symbol::parameter(name)] = {value, 0.0};
    return p;
}

std::vector<Expression> SystemSpec::locus_expressions() const {
    std::vector<Expression> out;
    for (const auto& l : singular) out.push_back(l.expr);
    return out;
}

SystemSpec parse_system(std::string_view text) {
    Document doc = parse_document(text);
    static const std::set<std::string> sections{"system", "params", "lagrangian", "singular"};
    for (const auto& entry : doc.entries) {
        if (!sections.count(entry.section)) {
            throw SyntaxError("entry outside the known sections [system] [params] [lagrangian] [singular]",
                              entry.offset, {"[system]", "[params]", "[lagrangian]", "[singular]"});
        }
        if (entry.section != "singular" && entry.key.empty()) {
            throw SyntaxError("expected 'key = value'", entry.offset, {"="});
        }
    }
    auto at_end = [&] { return text.empty() ? std::size_t{0} : text.size() - 1; };

    SystemSpec spec;
    const auto* name = doc.find("system", "name");
    if (!name) throw SyntaxError("missing 'name' in [system]", at_end(), {"name"});
    spec.name = name->value;
    const auto* dof = doc.find("system", "dof");
    if (!dof) throw SyntaxError("missing 'dof' in [system]", at_end(), {"dof"});
    static const std::regex positive("^[1-9][0-9]{0,5}$");
    if (!std::regex_match(dof->value, positive)) throw SyntaxError("dof must be a positive integer", dof->offset);
    spec.dof = std::stoi(dof->value);

    for (const auto* entry : doc.section("params")) {
        if (!valid_identifier(entry->key) || entry->key == "I" || entry->key == "t" ||
            function_named(entry->key) || entry->key == "conj" || coordinate_symbol(entry->key)) {
            throw SyntaxError("'" + entry->key + "' is not a usable parameter name", entry->offset, {"identifier"});
        }
        Expression value = simplify(parse_at(*entry));
        if (!value.is_constant() || !value.value().is_real()) {
            throw SyntaxError("parameter value must be a real number", entry->offset, {"number"});
        }
        spec.parameters[entry->key] = value.value().re.convert_to<double>();
    }

    const auto* lagrangian = doc.find("lagrangian", "L");
    if (!lagrangian) throw SyntaxError("missing 'L = ...' in [lagrangian]", at_end(), {"L"});
    spec.lagrangian = simplify(parse_at(*lagrangian));
    check_indices(spec.lagrangian, spec.dof, "lagrangian");
    for (const auto& s : free_symbols(spec.lagrangian)) {
        if (s.is_parameter() && !spec.parameters.count(s.name())) throw MissingParameter(s.name());
    }

    int unnamed = 0;
    for (const auto* entry : doc.section("singular")) {
        Expression e = simplify(parse_at(*entry));
        check_indices(e, spec.dof, "singular locus");
        for (const auto& s : free_symbols(e)) {
            if (s.is_parameter() && !spec.parameters.count(s.name())) {
                throw UnknownIdentifier("singular locus mentions unknown identifier '" + s.name() + "'");
            }
        }
        std::string locus_name = entry->key.empty() ? "locus" + std::to_string(++unnamed) : entry->key;
        spec.singular.push_back({locus_name, e});
    }
    return spec;
}

std::string load_system_text(const std::string& name_or_path) {
    std::string key = name_or_path;
    if (key.size() > 4 && key.ends_with(".sys")) key.resize(key.size() - 4);
    const auto& builtins = builtin_systems();
    if (auto it = builtins.find(key); it != builtins.end()) return it->second;
    std::ifstream in(name_or_path, std::ios::binary);
    if (!in) throw Error("no built-in system or readable file named '" + name_or_path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace complag
