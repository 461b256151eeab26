#pragma once

#include "complag/evaluate.hpp"
#include "complag/expression.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace complag {

/// Parses the ASCII expression syntax:
///   coordinates  z1 zb1 zd1 zbd1 zdd1 zbdd1 (and real-chart x1 y1 xd1 yd1 xdd1 ydd1)
///   t, I, numbers (integer, decimal, optional exponent), parameters (other identifiers)
///   functions    sqrt sin cos exp ln conj
///   operators    + - * / ^  (^ right-associative; unary minus binds below ^)
/// The returned tree mirrors the text; call simplify() for canonical form.
/// Throws SyntaxError carrying the byte offset and the expected-token set.
Expression parse_expr(std::string_view text);

/// Prints with minimal parentheses; parse_expr(print_expr(e)) simplifies to
/// simplify(e).
std::string print_expr(const Expression& e);

std::ostream& operator<<(std::ostream& os, const Expression& e);

/// Line-oriented sectioned key/value text shared by system files, equation
/// dumps and reports.  `#` starts a comment; a trailing backslash continues
/// the line.  Lines without `=` get an empty key.
struct Document {
    struct Entry {
        std::string section;
        std::string key;
        std::string value;
        std::size_t offset = 0;  // byte offset of the value in the source text
    };
    std::vector<Entry> entries;

    const Entry* find(std::string_view section, std::string_view key) const;
    std::vector<const Entry*> section(std::string_view name) const;
};

Document parse_document(std::string_view text);

struct Locus {
    std::string name;
    Expression expr;
};

struct SystemSpec {
    std::string name;
    int dof = 1;
    std::map<std::string, double> parameters;
    Expression lagrangian;
    std::vector<Locus> singular;

    /// Parameter values as evaluation bindings.
    Point parameter_point() const;
    std::vector<Expression> locus_expressions() const;
};

/// Parses and validates a system file.  Throws SyntaxError, MissingParameter,
/// IndexOutOfRange, UnknownIdentifier.
SystemSpec parse_system(std::string_view text);

/// Built-in system files, keyed by name ("hinged-rod", "central-force",
/// "oscillator", "free-particle").
const std::map<std::string, std::string>& builtin_systems();

/// Resolves a built-in name (with or without ".sys") or reads a file path.
/// Throws Error when neither exists.
std::string load_system_text(const std::string& name_or_path);

}  // namespace complag
