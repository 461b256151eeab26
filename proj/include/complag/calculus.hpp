#pragma once

#include "complag/algebra.hpp"
#include "complag/evaluate.hpp"

namespace complag {

/// Wirtinger partial derivative: every symbol, including the barred and
/// dotted families, is an independent variable.  Result is canonical.
Expression partial(const Expression& e, const Symbol& v);

/// Total time derivative along a curve: z -> zd -> zdd (and likewise for the
/// barred and real-chart families), parameters constant, t differentiated.
/// Throws OrderOverflow if e already contains second-derivative symbols.
Expression time_derivative(const Expression& e);

/// Chart substitution z = x + I*y, zb = x - I*y (and dotted analogues) for
/// indices 1..dof, without expansion.
Expression real_chart(const Expression& e, int dof);

/// real_chart followed by full expansion.
Expression to_real_chart(const Expression& e, int dof);

/// Degrees of freedom implied by the highest coordinate index in e (at least 1).
int max_index(const Expression& e);

struct FiniteDifferenceReport {
    Complex symbolic;
    Complex finite_difference;
    double abs_deviation = 0.0;
    double rel_deviation = 0.0;
};

/// Compares partial(e, v) at `point` with 1/2*(d/dx -+ I*d/dy) of the real
/// chart, using central differences with the given step.  `point` binds the
/// complex coordinates (barred ones are the conjugates) plus parameters and t.
/// rel_deviation divides by 1 + max(|symbolic|, (|d/dx| + |d/dy|)/2).
FiniteDifferenceReport wirtinger_fd_check(const Expression& e, const Symbol& v, const Point& point,
                                          double step = 1e-5);

}  // namespace complag
