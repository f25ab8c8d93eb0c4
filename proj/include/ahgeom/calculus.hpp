#pragma once

// Finite-difference covariant calculus on a MetricSource.
//
// Every derivative is a central difference along one coordinate. Nested
// quantities (R from Gamma, nabla R from R) difference the inner quantity
// directly, so each nesting level adds one stencil radius to the footprint.

#include <functional>

#include "ahgeom/chart.hpp"
#include "ahgeom/curvature_algebra.hpp"

namespace ahgeom {

enum class FdOrder { Second = 2, Fourth = 4 };

struct FdOptions {
    /// Base step; the step along coordinate k is step * max(1, |p_k|).
    double step = 1e-3;
    FdOrder order = FdOrder::Fourth;
};

/// Per-coordinate steps at p.
Vector fd_steps(const Vector& p, const FdOptions& opts);

/// Stencil radius in units of the step (1 for second order, 2 for fourth order).
int stencil_reach(FdOrder order);

struct ConnectionData {
    Vector point;
    Tensor3 gamma;  ///< gamma(i, j, k) = Gamma^i_{jk}
    Vector steps;
};

/// Levi-Civita symbols Gamma^i_{jk} = 1/2 g^{il} (d_j g_{lk} + d_k g_{lj} - d_l g_{jk}).
ConnectionData christoffel(const MetricSource& src, const Vector& p, const FdOptions& opts = {});

/// (0,4) curvature with R(x, y, y, x) the sectional curvature of an orthonormal pair;
/// R^l_{ijk} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik} + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik},
/// R_{ijkl} = g_{lp} R^p_{ijk}.
CurvatureTensor riemann(const MetricSource& src, const Vector& p, const FdOptions& opts = {});

/// S(y, z) = sum_a R(b_a, y, z, b_a) over a g-orthonormal frame.
Bilinear ricci(const CurvatureTensor& r);

/// nj(k, i, j) = (nabla_k J)^i_j.
Tensor3 nabla_J(const MetricSource& src, const Vector& p, const FdOptions& opts = {});

using BilinearField = std::function<Matrix(const Vector&)>;

/// out(k, i, j) = (nabla_k S)_{ij} = d_k S_ij - Gamma^l_{ki} S_lj - Gamma^l_{kj} S_il.
Tensor3 nabla_bilinear(const MetricSource& src, const Vector& p, const BilinearField& field,
                       const FdOptions& opts = {});

/// out(v, i, j, k, l) = (nabla_v R)_{ijkl}.
Tensor5 nabla_R(const MetricSource& src, const Vector& p, const FdOptions& opts = {});

/// (nabla_v S)_{jk} = g^{il} (nabla_v R)_{ijkl}; valid because nabla g = 0.
Tensor3 contract_nabla_R(const Tensor5& nr, const HermitianPoint& point);

/// Everything the point analysis needs, from one set of stencil evaluations.
struct PointGeometry {
    HermitianPoint point;
    ConnectionData connection;
    CurvatureTensor curvature;
    Bilinear ricci;
    Tensor3 nabla_j;
    Tensor5 nabla_r;
    Tensor3 nabla_s;
};

PointGeometry point_geometry(const MetricSource& src, const Vector& p, const FdOptions& opts = {});

/// Residuals of the three class conditions, measured in a g-orthonormal frame {f_a}
/// with A_ab = (nabla_{f_a} J) f_b:
///   kahler        = max_ab |A_ab|
///   nearly_kahler = max_{a<=b} |(A_ab + A_ba) / 2|
///   almost_kahler = max_abc |g(A_ab, f_c) + g(A_bc, f_a) + g(A_ca, f_b)| / 3
/// Each is bounded by `kahler`, so K-pass implies NK-pass and AK-pass at any tolerance.
struct ClassResiduals {
    double kahler = 0.0;
    double nearly_kahler = 0.0;
    double almost_kahler = 0.0;
};

ClassResiduals class_residuals(const HermitianPoint& point, const Tensor3& nabla_j);
ClassResiduals class_residuals(const MetricSource& src, const Vector& p, const FdOptions& opts = {});

/// max over orthonormal-frame quadruples of
/// |R(x,y,z,u) - R(x,y,Jz,Ju) - 1/2 g((nabla_x J)y - (nabla_y J)x, (nabla_z J)u - (nabla_u J)z)|.
double gray_ak2_residual(const CurvatureTensor& r, const Tensor3& nabla_j);
double gray_ak2_residual(const MetricSource& src, const Vector& p, const FdOptions& opts = {});

}  // namespace ahgeom
