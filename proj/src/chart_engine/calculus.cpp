#include "ahgeom/calculus.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>

namespace ahgeom {

namespace {

struct Stencil {
    std::array<double, 4> offsets;
    std::array<double, 4> weights;
    int size;
};

Stencil stencil(FdOrder order) {
    if (order == FdOrder::Second) return {{-1.0, 1.0, 0.0, 0.0}, {-0.5, 0.5, 0.0, 0.0}, 2};
    return {{-2.0, -1.0, 1.0, 2.0}, {1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0}, 4};
}

/// d/dq_k of f at p by a central difference.
template <class F>
auto derivative(const F& f, const Vector& p, int k, double h, FdOrder order) {
    const Stencil s = stencil(order);
    Vector q = p;
    q[k] = p[k] + s.offsets[0] * h;
    auto acc = f(q);
    acc *= s.weights[0] / h;
    for (int t = 1; t < s.size; ++t) {
        q[k] = p[k] + s.offsets[static_cast<std::size_t>(t)] * h;
        auto term = f(q);
        term *= s.weights[static_cast<std::size_t>(t)] / h;
        acc += term;
    }
    return acc;
}

void require_margin(const MetricSource& src, const Vector& p, const Vector& steps, FdOrder order, int levels) {
    if (p.size() != src.dim())
        throw DimensionError(fmt::format("{}: point has {} coordinates, expected {}", src.name(), p.size(), src.dim()));
    const auto& dom = src.domain();
    const auto names = src.coordinate_names();
    for (int k = 0; k < src.dim(); ++k) {
        if (!(steps[k] > 0.0) || p[k] + steps[k] == p[k])
            throw PreconditionError(fmt::format("finite-difference step {:.3e} underflows at {} = {}", steps[k],
                                                names[static_cast<std::size_t>(k)], p[k]));
        const double need = levels * stencil_reach(order) * steps[k];
        const auto& d = dom[static_cast<std::size_t>(k)];
        if (p[k] - need < d.lo || p[k] + need > d.hi)
            throw DomainError(fmt::format("{}: point {} is closer than {:.3e} to the domain boundary in {}",
                                          src.name(), format_point(p), need, names[static_cast<std::size_t>(k)]));
    }
}

Matrix inverse_metric(const Matrix& g, const Vector& q) {
    Eigen::LLT<Matrix> llt(0.5 * (g + g.transpose()));
    if (llt.info() != Eigen::Success)
        throw PreconditionError(fmt::format("metric is singular or indefinite at {}", format_point(q)));
    return llt.solve(Matrix::Identity(g.rows(), g.cols()));
}

Tensor3 gamma_at(const MetricSource& src, const Vector& q, const Vector& steps, FdOrder order) {
    const int n = src.dim();
    const Matrix g = src.sample(q).first;
    const Matrix ginv = inverse_metric(g, q);
    std::vector<Matrix> dg;
    dg.reserve(static_cast<std::size_t>(n));
    auto metric = [&](const Vector& x) { return src.sample(x).first; };
    for (int k = 0; k < n; ++k) dg.push_back(derivative(metric, q, k, steps[k], order));

    // first kind: c(l, j, k) = 1/2 (d_j g_lk + d_k g_lj - d_l g_jk)
    Tensor3 first(n);
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) {
                const auto uj = static_cast<std::size_t>(j);
                const auto uk = static_cast<std::size_t>(k);
                const auto ul = static_cast<std::size_t>(l);
                const double v = 0.5 * (dg[uj](l, k) + dg[uk](l, j) - dg[ul](j, k));
                first(l, j, k) = v;
                first(l, k, j) = v;
            }
    Tensor3 gamma(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double s = 0.0;
                for (int l = 0; l < n; ++l) s += ginv(i, l) * first(l, j, k);
                gamma(i, j, k) = s;
            }
    return gamma;
}

Tensor4 riemann_at(const MetricSource& src, const Vector& q, const Vector& steps, FdOrder order) {
    const int n = src.dim();
    const Matrix g = src.sample(q).first;
    const Tensor3 gam = gamma_at(src, q, steps, order);
    auto connection = [&](const Vector& x) { return gamma_at(src, x, steps, order); };
    std::vector<Tensor3> dgam;
    dgam.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) dgam.push_back(derivative(connection, q, i, steps[i], order));

    // up(l, i, j, k) = R^l_{ijk}
    Tensor4 up(n);
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double v = dgam[static_cast<std::size_t>(i)](l, j, k) - dgam[static_cast<std::size_t>(j)](l, i, k);
                    for (int m = 0; m < n; ++m) v += gam(l, i, m) * gam(m, j, k) - gam(l, j, m) * gam(m, i, k);
                    up(l, i, j, k) = v;
                }
    Tensor4 low(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double v = 0.0;
                    for (int p = 0; p < n; ++p) v += g(l, p) * up(p, i, j, k);
                    low(i, j, k, l) = v;
                }
    return low;
}

Tensor3 nabla_J_from(const MetricSource& src, const Vector& p, const Vector& steps, FdOrder order,
                     const Matrix& J, const Tensor3& gam) {
    const int n = src.dim();
    auto structure = [&](const Vector& x) { return src.sample(x).second; };
    Tensor3 out(n);
    for (int k = 0; k < n; ++k) {
        const Matrix dJ = derivative(structure, p, k, steps[k], order);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double v = dJ(i, j);
                for (int l = 0; l < n; ++l) v += gam(i, k, l) * J(l, j) - gam(l, k, j) * J(i, l);
                out(k, i, j) = v;
            }
    }
    return out;
}

Tensor5 nabla_R_from(const MetricSource& src, const Vector& p, const Vector& steps, FdOrder order,
                     const Tensor4& r, const Tensor3& gam) {
    const int n = src.dim();
    auto curvature = [&](const Vector& x) { return riemann_at(src, x, steps, order); };
    Tensor5 out(n);
    for (int v = 0; v < n; ++v) {
        const Tensor4 dr = derivative(curvature, p, v, steps[v], order);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        double s = dr(i, j, k, l);
                        for (int q = 0; q < n; ++q) {
                            s -= gam(q, v, i) * r(q, j, k, l);
                            s -= gam(q, v, j) * r(i, q, k, l);
                            s -= gam(q, v, k) * r(i, j, q, l);
                            s -= gam(q, v, l) * r(i, j, k, q);
                        }
                        out(v, i, j, k, l) = s;
                    }
    }
    return out;
}

}  // namespace

int stencil_reach(FdOrder order) { return order == FdOrder::Second ? 1 : 2; }

Vector fd_steps(const Vector& p, const FdOptions& opts) {
    Vector h(p.size());
    for (Eigen::Index k = 0; k < p.size(); ++k) h[k] = opts.step * std::max(1.0, std::abs(p[k]));
    return h;
}

ConnectionData christoffel(const MetricSource& src, const Vector& p, const FdOptions& opts) {
    const Vector steps = fd_steps(p, opts);
    require_margin(src, p, steps, opts.order, 1);
    return ConnectionData{p, gamma_at(src, p, steps, opts.order), steps};
}

CurvatureTensor riemann(const MetricSource& src, const Vector& p, const FdOptions& opts) {
    const Vector steps = fd_steps(p, opts);
    require_margin(src, p, steps, opts.order, 2);
    HermitianPoint point = src.evaluate(p);
    return CurvatureTensor(std::move(point), riemann_at(src, p, steps, opts.order));
}

Bilinear ricci(const CurvatureTensor& r) {
    const int n = r.dim();
    const Matrix& f = r.point.orthonormal_frame();
    const Matrix w = f * f.transpose();
    Matrix s = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            double v = 0.0;
            for (int i = 0; i < n; ++i)
                for (int l = 0; l < n; ++l) v += w(i, l) * r(i, j, k, l);
            s(j, k) = v;
        }
    return Bilinear(r.point, s);
}

Tensor3 nabla_J(const MetricSource& src, const Vector& p, const FdOptions& opts) {
    const Vector steps = fd_steps(p, opts);
    require_margin(src, p, steps, opts.order, 1);
    const HermitianPoint point = src.evaluate(p);
    return nabla_J_from(src, p, steps, opts.order, point.J(), gamma_at(src, p, steps, opts.order));
}

Tensor3 nabla_bilinear(const MetricSource& src, const Vector& p, const BilinearField& field, const FdOptions& opts) {
    const Vector steps = fd_steps(p, opts);
    require_margin(src, p, steps, opts.order, 1);
    const int n = src.dim();
    const Tensor3 gam = gamma_at(src, p, steps, opts.order);
    const Matrix s = field(p);
    Tensor3 out(n);
    for (int k = 0; k < n; ++k) {
        const Matrix ds = derivative(field, p, k, steps[k], opts.order);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double v = ds(i, j);
                for (int l = 0; l < n; ++l) v -= gam(l, k, i) * s(l, j) + gam(l, k, j) * s(i, l);
                out(k, i, j) = v;
            }
    }
    return out;
}

Tensor5 nabla_R(const MetricSource& src, const Vector& p, const FdOptions& opts) {
    const Vector steps = fd_steps(p, opts);
    require_margin(src, p, steps, opts.order, 3);
    const Tensor3 gam = gamma_at(src, p, steps, opts.order);
    const Tensor4 r = riemann_at(src, p, steps, opts.order);
    return nabla_R_from(src, p, steps, opts.order, r, gam);
}

Tensor3 contract_nabla_R(const Tensor5& nr, const HermitianPoint& point) {
    const int n = point.dim();
    const Matrix& ginv = point.g_inverse();
    Tensor3 out(n);
    for (int v = 0; v < n; ++v)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double s = 0.0;
                for (int i = 0; i < n; ++i)
                    for (int l = 0; l < n; ++l) s += ginv(i, l) * nr(v, i, j, k, l);
                out(v, j, k) = s;
            }
    return out;
}

PointGeometry point_geometry(const MetricSource& src, const Vector& p, const FdOptions& opts) {
    const Vector steps = fd_steps(p, opts);
    require_margin(src, p, steps, opts.order, 3);
    HermitianPoint point = src.evaluate(p);
    ConnectionData conn{p, gamma_at(src, p, steps, opts.order), steps};
    CurvatureTensor curv(point, riemann_at(src, p, steps, opts.order));
    Bilinear s = ricci(curv);
    Tensor3 nj = nabla_J_from(src, p, steps, opts.order, point.J(), conn.gamma);
    Tensor5 nr = nabla_R_from(src, p, steps, opts.order, curv.values, conn.gamma);
    Tensor3 ns = contract_nabla_R(nr, point);
    return PointGeometry{std::move(point), std::move(conn), std::move(curv), std::move(s),
                         std::move(nj),    std::move(nr),   std::move(ns)};
}

namespace {

/// a[a][b] = (nabla_{f_a} J) f_b in coordinates.
std::vector<std::vector<Vector>> frame_derivatives(const HermitianPoint& point, const Tensor3& nj) {
    const int n = point.dim();
    const Matrix& f = point.orthonormal_frame();
    std::vector<std::vector<Vector>> out(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        Matrix m = Matrix::Zero(n, n);
        for (int k = 0; k < n; ++k) {
            const double c = f(k, a);
            if (c == 0.0) continue;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) m(i, j) += c * nj(k, i, j);
        }
        auto& row = out[static_cast<std::size_t>(a)];
        row.reserve(static_cast<std::size_t>(n));
        for (int b = 0; b < n; ++b) row.push_back(m * f.col(b));
    }
    return out;
}

}  // namespace

ClassResiduals class_residuals(const HermitianPoint& point, const Tensor3& nj) {
    const int n = point.dim();
    const Matrix& f = point.orthonormal_frame();
    const auto A = frame_derivatives(point, nj);
    auto at = [&](int a, int b) -> const Vector& { return A[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; };

    ClassResiduals res;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            res.kahler = std::max(res.kahler, point.norm(at(a, b)));
            if (b >= a) res.nearly_kahler = std::max(res.nearly_kahler, point.norm(0.5 * (at(a, b) + at(b, a))));
            for (int c = 0; c < n; ++c) {
                const double cyc = point.inner(at(a, b), f.col(c)) + point.inner(at(b, c), f.col(a)) +
                                   point.inner(at(c, a), f.col(b));
                res.almost_kahler = std::max(res.almost_kahler, std::abs(cyc) / 3.0);
            }
        }
    return res;
}

ClassResiduals class_residuals(const MetricSource& src, const Vector& p, const FdOptions& opts) {
    return class_residuals(src.evaluate(p), nabla_J(src, p, opts));
}

double gray_ak2_residual(const CurvatureTensor& r, const Tensor3& nj) {
    const HermitianPoint& point = r.point;
    const int n = point.dim();
    const Matrix& f = point.orthonormal_frame();
    const Matrix finv = f.inverse();
    const Matrix jf = finv * point.J() * f;
    const Tensor4 rf = change_basis(r.values, f);
    const Tensor4 rjj = transform_slots(rf, nullptr, nullptr, &jf, &jf);
    const auto A = frame_derivatives(point, nj);

    // d[a][b] = (nabla_{f_a} J) f_b - (nabla_{f_b} J) f_a
    std::vector<Vector> d(static_cast<std::size_t>(n * n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            d[static_cast<std::size_t>(a * n + b)] =
                A[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] -
                A[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)];

    double worst = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int e = 0; e < n; ++e) {
                    const double rhs = 0.5 * point.inner(d[static_cast<std::size_t>(a * n + b)],
                                                         d[static_cast<std::size_t>(c * n + e)]);
                    worst = std::max(worst, std::abs(rf(a, b, c, e) - rjj(a, b, c, e) - rhs));
                }
    return worst;
}

double gray_ak2_residual(const MetricSource& src, const Vector& p, const FdOptions& opts) {
    const Vector steps = fd_steps(p, opts);
    require_margin(src, p, steps, opts.order, 2);
    const HermitianPoint point = src.evaluate(p);
    const Tensor3 gam = gamma_at(src, p, steps, opts.order);
    const CurvatureTensor r(point, riemann_at(src, p, steps, opts.order));
    return gray_ak2_residual(r, nabla_J_from(src, p, steps, opts.order, point.J(), gam));
}

}  // namespace ahgeom
