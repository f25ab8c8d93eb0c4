#include "ahgeom/curvature_algebra.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace ahgeom {

CurvatureTensor psi(const Bilinear& q) {
    const HermitianPoint& p = q.point;
    const int n = p.dim();
    const Matrix& om = p.omega();  // om(a, b) = g(a, J b)
    const Matrix qj = q.values * p.J();  // qj(a, b) = Q(a, J b)

    CurvatureTensor out(p);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                for (int u = 0; u < n; ++u) {
                    out(x, y, z, u) = om(x, u) * qj(y, z) - om(x, z) * qj(y, u) - 2.0 * om(x, y) * qj(z, u) +
                                      om(y, z) * qj(x, u) - om(y, u) * qj(x, z) - 2.0 * om(z, u) * qj(x, y);
                }
    return out;
}

CurvatureTensor pi1(const HermitianPoint& point) {
    const int n = point.dim();
    const Matrix& g = point.g();
    CurvatureTensor out(point);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                for (int u = 0; u < n; ++u) out(x, y, z, u) = g(x, u) * g(y, z) - g(x, z) * g(y, u);
    return out;
}

CurvatureTensor pi2(const HermitianPoint& point) { return 0.5 * psi(Bilinear(point, point.g())); }

double ah_identity_residual(const CurvatureTensor& r, AhIdentity which) {
    const Matrix& J = r.point.J();
    const Tensor4& v = r.values;
    Tensor4 diff(r.dim());
    switch (which) {
        case AhIdentity::One:
            diff = v - transform_slots(v, nullptr, nullptr, &J, &J);
            break;
        case AhIdentity::Two:
            diff = v - transform_slots(v, nullptr, nullptr, &J, &J) - transform_slots(v, nullptr, &J, nullptr, &J) -
                   transform_slots(v, &J, nullptr, nullptr, &J);
            break;
        case AhIdentity::Three:
            diff = v - transform_slots(v, &J, &J, &J, &J);
            break;
    }
    return diff.max_abs();
}

double riemann_symmetry_residual(const CurvatureTensor& r) {
    const int n = r.dim();
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const double v = r(i, j, k, l);
                    worst = std::max({worst, std::abs(v + r(j, i, k, l)), std::abs(v + r(i, j, l, k)),
                                      std::abs(v - r(k, l, i, j)), std::abs(v + r(j, k, i, l) + r(k, i, j, l))});
                }
    return worst;
}

double sectional_curvature(const CurvatureTensor& r, const Plane& plane) {
    const HermitianPoint& p = r.point;
    if (plane.x.size() != p.dim() || plane.y.size() != p.dim())
        throw DimensionError(fmt::format("plane vectors of length {}/{} at a point of dimension {}",
                                         plane.x.size(), plane.y.size(), p.dim()));
    const double xx = p.inner(plane.x, plane.x);
    const double yy = p.inner(plane.y, plane.y);
    const double xy = p.inner(plane.x, plane.y);
    const double gram = xx * yy - xy * xy;
    if (!(gram > 1e-12 * xx * yy) || xx == 0.0 || yy == 0.0)
        throw PreconditionError(fmt::format("degenerate plane: Gram determinant {:.3e}", gram));
    return r.evaluate(plane.x, plane.y, plane.y, plane.x) / gram;
}

CurvatureTensor build_from_decomposition(const Bilinear& s, double nu, double tol) {
    const double asym = s.symmetry_residual();
    if (asym > tol)
        throw PreconditionError(fmt::format("Ricci-type form not symmetric: residual {:.3e}", asym));
    const double jinv = s.j_invariance_residual();
    if (jinv > tol)
        throw PreconditionError(fmt::format("Ricci-type form not J-invariant: residual {:.3e}", jinv));

    const HermitianPoint& p = s.point;
    const double m = p.m();
    return (1.0 / 6.0) * psi(s) + nu * pi1(p) - ((2.0 * m - 1.0) / 3.0 * nu) * pi2(p);
}

namespace {

double dot(const Tensor4& a, const Tensor4& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.values()[i] * b.values()[i];
    return s;
}

}  // namespace

PiSpanFit fit_pi_span(const CurvatureTensor& r) {
    const Tensor4 p1 = pi1(r.point).values;
    const Tensor4 p2 = pi2(r.point).values;
    const double a11 = dot(p1, p1);
    const double a12 = dot(p1, p2);
    const double a22 = dot(p2, p2);
    const double r1 = dot(r.values, p1);
    const double r2 = dot(r.values, p2);

    PiSpanFit fit;
    const double det = a11 * a22 - a12 * a12;
    if (det <= 1e-12 * a11 * a22) {
        fit.degenerate = true;
        fit.a = r1 / a11;
        fit.b = 0.0;
    } else {
        fit.a = (a22 * r1 - a12 * r2) / det;
        fit.b = (a11 * r2 - a12 * r1) / det;
    }
    Tensor4 rest = r.values - fit.a * p1 - fit.b * p2;
    fit.residual = rest.frobenius();
    return fit;
}

}  // namespace ahgeom
