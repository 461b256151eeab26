#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace complag {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnboundSymbol : public Error {
public:
    explicit UnboundSymbol(const std::string& symbol)
        : Error("unbound symbol: " + symbol), symbol_(symbol) {}
    const std::string& symbol() const noexcept { return symbol_; }

private:
    std::string symbol_;
};

class DivisionByZero : public Error {
public:
    DivisionByZero() : Error("division by zero") {}
};

class DomainError : public Error {
public:
    using Error::Error;
};

class CyclicBinding : public Error {
public:
    explicit CyclicBinding(const std::string& symbol)
        : Error("cyclic binding: value for " + symbol + " mentions " + symbol) {}
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& message, std::size_t offset, std::vector<std::string> expected = {})
        : Error(format(message, offset, expected)), offset_(offset), expected_(std::move(expected)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    static std::string format(const std::string& message, std::size_t offset,
                              const std::vector<std::string>& expected) {
        std::string out = "syntax error at byte " + std::to_string(offset) + ": " + message;
        if (!expected.empty()) {
            out += " (expected";
            for (std::size_t k = 0; k < expected.size(); ++k) out += (k ? ", " : " ") + expected[k];
            out += ")";
        }
        return out;
    }

    std::size_t offset_;
    std::vector<std::string> expected_;
};

class UnknownIdentifier : public Error {
public:
    using Error::Error;
};

class MissingParameter : public Error {
public:
    explicit MissingParameter(const std::string& name)
        : Error("lagrangian mentions parameter '" + name + "' with no value in [params]") {}
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

class OrderOverflow : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class AllSamplesRejected : public Error {
public:
    using Error::Error;
};

class SingularMassMatrix : public Error {
public:
    explicit SingularMassMatrix(double condition, const std::string& context = {})
        : Error("mass matrix is singular (condition estimate " + std::to_string(condition) + ")" +
                (context.empty() ? "" : " " + context)),
          condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

class SingularLocus : public Error {
public:
    explicit SingularLocus(const std::string& locus, const std::string& context = {})
        : Error("state reached singular locus " + locus + (context.empty() ? "" : " " + context)), locus_(locus) {}
    const std::string& locus() const noexcept { return locus_; }

private:
    std::string locus_;
};

}  // namespace complag
