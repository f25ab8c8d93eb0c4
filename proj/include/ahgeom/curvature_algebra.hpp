#pragma once

// Point-level curvature algebra on almost Hermitian tangent spaces.
//
// Sign convention: R(x, y, z, u) = g(R(x, y) z, u) with
// R(x, y) = [nabla_x, nabla_y] - nabla_[x, y], so the unit round sphere has
// R = pi1 and the sectional curvature of an orthonormal pair is R(x, y, y, x).

#include "ahgeom/hermitian.hpp"

namespace ahgeom {

/// psi(Q)(x,y,z,u) = g(x,Ju)Q(y,Jz) - g(x,Jz)Q(y,Ju) - 2g(x,Jy)Q(z,Ju)
///                 + g(y,Jz)Q(x,Ju) - g(y,Ju)Q(x,Jz) - 2g(z,Ju)Q(x,Jy).
CurvatureTensor psi(const Bilinear& q);

/// pi1(x,y,z,u) = g(x,u)g(y,z) - g(x,z)g(y,u).
CurvatureTensor pi1(const HermitianPoint& point);

/// pi2 = psi(g) / 2.
CurvatureTensor pi2(const HermitianPoint& point);

/// Which defining identity of the AH_1, AH_2, AH_3 classes to test.
enum class AhIdentity { One = 1, Two = 2, Three = 3 };

/// Max over coordinate quadruples of the identity's left minus right side.
///   1) R(X,Y,Z,U) = R(X,Y,JZ,JU)
///   2) R(X,Y,Z,U) = R(X,Y,JZ,JU) + R(X,JY,Z,JU) + R(JX,Y,Z,JU)
///   3) R(X,Y,Z,U) = R(JX,JY,JZ,JU)
double ah_identity_residual(const CurvatureTensor& r, AhIdentity which);

/// Max violation of the antisymmetries, pair symmetry and the first Bianchi identity.
double riemann_symmetry_residual(const CurvatureTensor& r);

/// R(x,y,y,x) / (g(x,x)g(y,y) - g(x,y)^2). Throws PreconditionError on a degenerate pair.
double sectional_curvature(const CurvatureTensor& r, const Plane& plane);

/// R = psi(S)/6 + nu*pi1 - ((2m-1)/3)*nu*pi2.
/// Throws PreconditionError if S is not symmetric or not J-invariant within `tol`.
CurvatureTensor build_from_decomposition(const Bilinear& s, double nu, double tol = kDefaultInputTol);

struct PiSpanFit {
    double a = 0.0;  ///< coefficient of pi1
    double b = 0.0;  ///< coefficient of pi2
    double residual = 0.0;  ///< Frobenius norm of R - a*pi1 - b*pi2
    /// pi1 and pi2 are parallel (real dimension 2, where pi2 = 3*pi1); b is then 0.
    bool degenerate = false;
};

/// Least-squares projection of R onto span{pi1, pi2}.
PiSpanFit fit_pi_span(const CurvatureTensor& r);

}  // namespace ahgeom
