#pragma once

#include "complag/expression.hpp"

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace complag {

/// Numeric values for symbols.
using Point = std::map<Symbol, Complex>;

/// Evaluates with standard complex arithmetic; sqrt, ln and non-integer
/// powers take the principal branch.  Throws UnboundSymbol, DivisionByZero,
/// DomainError (ln of 0).
Complex eval(const Expression& e, const Point& point);

namespace numeric {

/// Pins zero imaginary parts to +0 so the negative real axis has arg = pi.
Complex principal(Complex z);
/// b^n by repeated squaring.  Throws DivisionByZero for 0^(negative).
Complex integer_power(Complex base, long long exponent);
/// Principal-branch power with the exact-exponent shortcuts used by eval.
Complex power(Complex base, const Complex& exponent);
Complex function(Function f, const Complex& x);

}  // namespace numeric

std::string format_point(const Point& point);

struct Interval {
    double lo = -1.0;
    double hi = 1.0;
};

/// Where random evaluation points are drawn from.  On the real slice the
/// barred symbols are the conjugates of the unbarred ones and the real-chart
/// symbols are their real/imaginary parts; otherwise every symbol is drawn
/// independently.
struct SamplingDomain {
    int dof = 1;
    Interval position_re{0.2, 0.8};
    Interval position_im{-0.4, 0.4};
    Interval velocity_re{-1.0, 1.0};
    Interval velocity_im{-1.0, 1.0};
    Interval acceleration_re{-1.0, 1.0};
    Interval acceleration_im{-1.0, 1.0};
    Interval time{0.0, 1.0};
    bool real_slice = true;
    /// Fixed parameter values; parameters not listed are drawn from parameter_range.
    std::map<std::string, double> parameters;
    Interval parameter_range{0.5, 2.0};
    /// Points where any of these is smaller than locus_guard in magnitude are rejected.
    std::vector<Expression> loci;
    double locus_guard = 1e-6;
    /// Rejected draws allowed per requested sample before giving up.
    int retries_per_sample = 50;

    /// Draws a point binding every coordinate of indices 1..dof, t, and the
    /// given parameters.
    Point draw(std::mt19937_64& rng, const std::set<std::string>& parameter_names) const;
    bool admissible(const Point& point) const;
};

/// Parameter names among the free symbols of the expressions.
std::set<std::string> parameter_names(const std::vector<Expression>& exprs);

/// Draws `count` admissible points (resampling on evaluation errors of any of
/// `exprs` and on singular loci).  Throws AllSamplesRejected if none.
std::vector<Point> sample_points(const SamplingDomain& domain, const std::vector<Expression>& exprs, int count,
                                 std::uint64_t seed);

struct NumericComparison {
    bool equal = false;
    double max_deviation = 0.0;
    Point argmax;
    int samples = 0;
    int rejected = 0;
};

/// Randomized equality: relative deviation |e1 - e2| / (1 + |e1|) at `trials`
/// admissible points.  Points where either side fails to evaluate are
/// resampled; the retry budget is bounded by the domain.
NumericComparison equal_numeric(const Expression& e1, const Expression& e2, int trials, double tol,
                                const SamplingDomain& domain = {}, std::uint64_t seed = 12345);

inline double relative_deviation(const Complex& reference, const Complex& other) {
    return std::abs(reference - other) / (1.0 + std::abs(reference));
}

}  // namespace complag
