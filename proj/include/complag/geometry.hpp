#pragma once

#include "complag/algebra.hpp"
#include "complag/calculus.hpp"
#include "complag/error.hpp"

#include <Eigen/Core>

namespace Eigen {

// Symbolic scalars in Eigen containers.  Expression is not ordered
// numerically, so only the arithmetic parts of Eigen apply to it.
template <>
struct NumTraits<complag::Expression> : GenericNumTraits<complag::Expression> {
    using Real = complag::Expression;
    using NonInteger = complag::Expression;
    using Literal = complag::Expression;
    using Nested = complag::Expression;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 8,
        MulCost = 8,
    };
    static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace complag {

using ExprVector = Eigen::Matrix<Expression, Eigen::Dynamic, 1>;
using ExprMatrix = Eigen::Matrix<Expression, Eigen::Dynamic, Eigen::Dynamic>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

template <class Scalar>
Scalar unit_i();
template <>
inline Expression unit_i<Expression>() { return imaginary(); }
template <>
inline Complex unit_i<Complex>() { return {0.0, 1.0}; }

/// Tangent vectors are 2n coefficient columns over (d/dz^1..d/dz^n,
/// d/dzb^1..d/dzb^n).  J multiplies the unbarred half by I and the barred
/// half by -I.
template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> apply_J(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& v) {
    if (v.size() % 2 != 0) throw DimensionMismatch("tangent vector must have an even number of coefficients");
    const Eigen::Index n = v.size() / 2;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(v.size());
    const Scalar i = unit_i<Scalar>();
    for (Eigen::Index k = 0; k < n; ++k) {
        out(k) = i * v(k);
        out(n + k) = -i * v(n + k);
    }
    return out;
}

/// g(JX, Y) + g(X, JY) for the bilinear form with matrix g.
template <class Scalar>
Scalar hermitian_residual_raw(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& g,
                              const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& X,
                              const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& Y) {
    if (g.rows() != g.cols() || g.rows() != X.size() || X.size() != Y.size()) {
        throw DimensionMismatch("metric and tangent vectors disagree in dimension");
    }
    auto JX = apply_J(X);
    auto JY = apply_J(Y);
    return (JX.transpose() * g * Y)(0, 0) + (X.transpose() * g * JY)(0, 0);
}

inline Complex hermitian_residual(const ComplexMatrix& g, const ComplexVector& X, const ComplexVector& Y) {
    return hermitian_residual_raw<Complex>(g, X, Y);
}

/// Symbolic residual, expanded so that compatible metrics give exactly 0.
inline Expression hermitian_residual(const ExprMatrix& g, const ExprVector& X, const ExprVector& Y) {
    return expand(hermitian_residual_raw<Expression>(g, X, Y));
}

/// Second-derivative blocks of L over (z, zb) and the quantities built from
/// them.  H_ab(i, j) = d^2 L / da^j db^i, so H_zbz(i, j) = d^2 L / dzb^j dz^i
/// and H_zbz = H_zzb^T.  One-forms are 2n columns over (dz^j, dzb^j).
struct KaehlerData {
    int dof = 0;
    ExprMatrix H_zz, H_zbz, H_zzb, H_zbzb;
    Expression energy;
    ExprVector dEL;
    ExprVector i_xi_PhiL;
};

/// The four Hessian blocks only.
KaehlerData kaehler_coefficients(const Expression& L, int dof);

/// Hessian blocks plus energy, dE_L and the contraction of Phi_L with the semispray.
KaehlerData kaehler_data(const Expression& L, int dof);

/// Antisymmetric 2n x 2n coefficient matrix W of Phi_L = -dd_J L, where
/// Phi_L = 1/2 * W(a, b) e^a ^ e^b over the basis (dz, dzb).  Only the mixed
/// blocks survive: W(z_i, zb_j) = 2*I*d^2L/dz^i dzb^j.
ExprMatrix kaehler_form(const KaehlerData& k);

/// The same matrix computed directly as -d of the one-form d_J L
/// (coefficients I*dL/dz^k and -I*dL/dzb^k), without the Hessian blocks.
ExprMatrix kaehler_form_direct(const Expression& L, int dof);

/// Semispray on integral curves: (zd^i, zbd^i).
ExprVector semispray(int dof);
/// V = J(semispray) = (I*zd^i, -I*zbd^i).
ExprVector liouville(int dof);

/// V(L): Liouville coefficients contracted with (dL/dz^i, dL/dzb^i).
Expression liouville_derivative(const Expression& L, int dof);

/// I*zd^i*dL/dz^i - I*zbd^i*dL/dzb^i - L.
Expression paper_energy(const Expression& L, int dof);
/// zd^i*dL/dzd^i + zbd^i*dL/dzbd^i - L.
Expression classical_energy(const Expression& L, int dof);

/// (dE/dz^j, dE/dzb^j) with the velocities held fixed.
ExprVector energy_differential(const Expression& E, int dof);

/// i_xi Phi_L from the mechanical contraction W^T xi.  Throws DimensionMismatch.
ExprVector interior_product(const KaehlerData& k, const ExprVector& xi);

/// i_xi Phi_L assembled term by term from the eight-term expansion with its
/// Kronecker-delta placements taken literally.  Agrees with
/// interior_product for one degree of freedom.
ExprVector interior_product_termwise(const KaehlerData& k, const ExprVector& xi);

/// The published one-form relation between the Hessian terms and dL, summed
/// over the repeated index i, with dzb coefficients built from the velocity
/// derivatives dL/dzd^j exactly as displayed.
ExprVector motion_form_termwise(const Expression& L, int dof);

/// i_xi Phi_L - dE_L with xi the semispray.
ExprVector dynamics_residual(const Expression& L, int dof);

/// Third mixed partials over (z, zb) commute: returns the largest numeric
/// deviation over all index triples at the given points.
double third_partial_asymmetry(const Expression& L, int dof, const std::vector<Point>& points);

}  // namespace complag
