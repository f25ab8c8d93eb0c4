#include "ahgeom/analysis.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace ahgeom {

Rng make_rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return Rng(seq);
}

namespace {

Vector gaussian(int n, Rng& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = dist(rng);
    return v;
}

Matrix gaussian_matrix(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix a(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) a(i, j) = dist(rng);
    return a;
}

constexpr int kMaxResample = 100;

}  // namespace

Vector random_unit_vector(const HermitianPoint& point, Rng& rng) {
    for (int attempt = 0; attempt < kMaxResample; ++attempt) {
        const Vector xi = gaussian(point.dim(), rng);
        const double len = xi.norm();
        if (len < 1e-8) continue;
        return point.orthonormal_frame() * (xi / len);
    }
    throw PreconditionError("could not draw a nonzero random vector");
}

Plane antiholomorphic_plane(const HermitianPoint& point, const Vector& x, const Vector& y) {
    if (point.m() < 2) throw PreconditionError("antiholomorphic planes need complex dimension m >= 2");
    const double xn = point.norm(x);
    if (!(xn > 0.0)) throw PreconditionError("zero vector cannot span a plane");
    const Vector ux = x / xn;
    const Vector jx = point.J() * ux;
    Vector v = y;
    for (int pass = 0; pass < 2; ++pass) v -= point.inner(v, ux) * ux + point.inner(v, jx) * jx;
    const double vn = point.norm(v);
    if (!(vn > 1e-8 * std::max(1.0, point.norm(y))))
        throw PreconditionError("candidate lies in the holomorphic plane of x");
    return Plane{ux, v / vn, PlaneKind::Antiholomorphic};
}

std::vector<Plane> sample_antiholomorphic_planes(const HermitianPoint& point, int n, Rng& rng) {
    if (n < 1) throw PreconditionError("plane count must be positive");
    if (point.m() < 2) throw PreconditionError("antiholomorphic planes need complex dimension m >= 2");
    std::vector<Plane> out;
    out.reserve(static_cast<std::size_t>(n));
    while (static_cast<int>(out.size()) < n) {
        const Vector x = random_unit_vector(point, rng);
        bool done = false;
        for (int attempt = 0; attempt < kMaxResample && !done; ++attempt) {
            try {
                out.push_back(antiholomorphic_plane(point, x, random_unit_vector(point, rng)));
                done = true;
            } catch (const PreconditionError&) {
            }
        }
        if (!done) throw PreconditionError("antiholomorphic projection kept degenerating");
    }
    return out;
}

std::vector<Plane> sample_holomorphic_planes(const HermitianPoint& point, int n, Rng& rng) {
    if (n < 1) throw PreconditionError("plane count must be positive");
    std::vector<Plane> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Vector x = random_unit_vector(point, rng);
        Vector jx = point.J() * x;
        out.push_back(Plane{std::move(x), std::move(jx), PlaneKind::Holomorphic});
    }
    return out;
}

CurvatureStats constancy(const CurvatureTensor& r, std::span<const Plane> planes) {
    if (planes.size() < 2) throw PreconditionError("constancy needs at least two planes");
    std::vector<double> k;
    k.reserve(planes.size());
    for (const auto& p : planes) k.push_back(sectional_curvature(r, p));
    CurvatureStats st;
    st.samples = static_cast<int>(k.size());
    st.kind = planes.front().kind;
    for (const auto& p : planes)
        if (p.kind != st.kind) st.kind = PlaneKind::Generic;
    double sum = 0.0;
    for (double v : k) sum += v;
    st.mean = sum / static_cast<double>(k.size());
    for (double v : k) st.max_deviation = std::max(st.max_deviation, std::abs(v - st.mean));
    return st;
}

SpectralFrame adapted_eigenframe(const Bilinear& s, const EigenframeOptions& opts) {
    const HermitianPoint& point = s.point;
    const int n = point.dim();
    const double asym = s.symmetry_residual();
    if (asym > opts.closure_tol)
        throw PreconditionError(fmt::format("Ricci-type form not symmetric: residual {:.3e}", asym));

    const Matrix sym = 0.5 * (s.values + s.values.transpose());
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(sym, point.g());
    if (es.info() != Eigen::Success) throw PreconditionError("generalized eigenproblem did not converge");
    const Vector lambda = es.eigenvalues();
    const Matrix vecs = es.eigenvectors();  // g-orthonormal columns

    SpectralFrame frame;
    const Matrix& J = point.J();
    int start = 0;
    while (start < n) {
        int end = start + 1;
        while (end < n && lambda[end] - lambda[end - 1] <= opts.merge_tol * std::max(1.0, std::abs(lambda[end])))
            ++end;
        const int size = end - start;
        if (size % 2 != 0)
            throw PreconditionError(fmt::format(
                "eigenvalue {:.6g} has odd multiplicity {}; the form is not J-invariant", lambda[start], size));

        const Matrix space = vecs.middleCols(start, size);
        std::vector<Vector> pending;
        for (int c = 0; c < size; ++c) pending.push_back(space.col(c));
        std::vector<Vector> chosen;

        for (int pair = 0; pair < size / 2; ++pair) {
            for (auto& v : pending)
                for (int pass = 0; pass < 2; ++pass)
                    for (const auto& c : chosen) v -= point.inner(v, c) * c;
            auto best = std::max_element(pending.begin(), pending.end(), [&](const Vector& a, const Vector& b) {
                return point.norm(a) < point.norm(b);
            });
            const double len = point.norm(*best);
            if (!(len > 1e-6)) throw PreconditionError("eigenspace deflation lost rank");
            const Vector e = *best / len;
            pending.erase(best);
            const Vector je = J * e;

            const Vector proj = space * (space.transpose() * (point.g() * je));
            const double gap = point.norm(je - proj);
            if (gap > opts.closure_tol)
                throw PreconditionError(
                    fmt::format("eigenspace of {:.6g} is not J-closed (distance {:.3e}); the form is not J-invariant",
                                lambda[start], gap));
            frame.basis.push_back(e);
            frame.basis.push_back(je);
            frame.eigenvalues.push_back(s(e, e));
            chosen.push_back(e);
            chosen.push_back(je);
        }
        start = end;
    }
    return frame;
}

Matrix eigenframe_reconstruction(const SpectralFrame& frame, const Bilinear& s) {
    const HermitianPoint& point = s.point;
    Matrix sum = s.values;
    for (std::size_t i = 0; i < frame.eigenvalues.size(); ++i) {
        const Vector ge = point.g() * frame.basis[2 * i];
        const Vector gje = point.g() * frame.basis[2 * i + 1];
        sum -= frame.eigenvalues[i] * (ge * ge.transpose() + gje * gje.transpose());
    }
    return sum;
}

EinsteinFit einstein_residual(const Bilinear& s) {
    const HermitianPoint& p = s.point;
    EinsteinFit fit;
    fit.lambda = (p.g_inverse() * s.values).trace() / p.dim();
    fit.residual = (s.values - fit.lambda * p.g()).cwiseAbs().maxCoeff();
    return fit;
}

double decomposition_residual(const CurvatureTensor& r, const Bilinear& s, double nu, double tol) {
    if (r.dim() != s.point.dim())
        throw DimensionError(fmt::format("curvature of dimension {} against Ricci form of dimension {}", r.dim(),
                                         s.point.dim()));
    return max_abs_diff(r.values, build_from_decomposition(s, nu, tol).values);
}

double bianchi2_residual(const Tensor5& nr) {
    const int n = nr.dim();
    double worst = 0.0;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                for (int u = 0; u < n; ++u)
                    for (int v = 0; v < n; ++v)
                        worst = std::max(worst, std::abs(nr(x, y, z, u, v) + nr(y, z, x, u, v) + nr(z, x, y, u, v)));
    return worst;
}

double frame_relation_residual(const SpectralFrame& frame, const HermitianPoint& point, const Tensor3& ns,
                               const Tensor3& nj, double nu) {
    const int n = point.dim();
    const int m = point.m();
    // directional derivatives along e_j
    auto along = [&](const Tensor3& t, const Vector& dir) {
        Matrix out = Matrix::Zero(n, n);
        for (int k = 0; k < n; ++k) {
            if (dir[k] == 0.0) continue;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) out(a, b) += dir[k] * t(k, a, b);
        }
        return out;
    };
    double worst = 0.0;
    for (int j = 0; j < m; ++j) {
        const Vector& ej = frame.e(j);
        const Matrix dS = along(ns, ej);
        const Vector dJej = along(nj, ej) * ej;
        for (int i = 0; i < m; ++i) {
            if (i == j) continue;
            const Vector& ei = frame.e(i);
            const double lhs = ei.dot(dS * ej);
            const double coeff = frame.eigenvalues[static_cast<std::size_t>(i)] +
                                 frame.eigenvalues[static_cast<std::size_t>(j)] - 2.0 * (2.0 * m - 1.0) * nu;
            worst = std::max(worst, std::abs(lhs + coeff * point.inner(frame.je(i), dJej)));
        }
    }
    return worst;
}

std::string to_string(VerdictKind k) {
    switch (k) {
        case VerdictKind::RealSpaceForm: return "RealSpaceForm";
        case VerdictKind::ComplexSpaceForm: return "ComplexSpaceForm";
        case VerdictKind::NotConstantAntiholomorphic: return "NotConstantAntiholomorphic";
        case VerdictKind::NotAH3: return "NotAH3";
        case VerdictKind::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

std::string describe(const Verdict& v) {
    if (v.has_constant()) return fmt::format("{}({:.12g})", to_string(v.kind), v.constant);
    return to_string(v.kind);
}

Verdict classify(const CurvatureTensor& r, const Bilinear& s, const ClassResiduals& classes,
                 const CurvatureStats& holo, const std::optional<CurvatureStats>& antiholo, double tol) {
    Verdict v;
    v.ah3_residual = ah_identity_residual(r, AhIdentity::Three);
    v.antiholomorphic_deviation = antiholo ? antiholo->max_deviation : 0.0;
    v.kahler_residual = classes.kahler;
    v.einstein_residual = einstein_residual(s).residual;
    v.fit = fit_pi_span(r);

    if (v.ah3_residual > tol) {
        v.kind = VerdictKind::NotAH3;
        return v;
    }
    if (antiholo && antiholo->max_deviation > tol) {
        v.kind = VerdictKind::NotConstantAntiholomorphic;
        return v;
    }
    if (v.fit.residual > tol) return v;

    if (v.fit.degenerate) {
        // Real dimension 2: pi2 = 3 pi1, so c*pi1 is both the real form of curvature c
        // and the complex form of holomorphic curvature c. Report the latter when Kaehler.
        const double c = v.fit.a;
        if (holo.max_deviation > tol) return v;
        if (classes.kahler <= tol) {
            v.kind = VerdictKind::ComplexSpaceForm;
            v.fit.a = c / 4.0;
            v.fit.b = c / 4.0;
        } else {
            v.kind = VerdictKind::RealSpaceForm;
        }
        v.constant = c;
        return v;
    }
    if (std::abs(v.fit.b) <= tol) {
        v.kind = VerdictKind::RealSpaceForm;
        v.constant = v.fit.a;
    } else if (std::abs(v.fit.b - v.fit.a) <= tol && classes.kahler <= tol) {
        v.kind = VerdictKind::ComplexSpaceForm;
        v.constant = 4.0 * v.fit.a;
    }
    return v;
}

SchurReport schur_check(const MetricSource& src, std::span<const Vector> points, const FdOptions& opts, int samples,
                        std::uint64_t seed) {
    if (points.size() < 2) throw PreconditionError("the global constancy check needs at least two points");
    if (src.m() < 2) throw PreconditionError("antiholomorphic planes need complex dimension m >= 2");
    SchurReport rep;
    rep.applies = src.m() > 2;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const CurvatureTensor r = riemann(src, points[i], opts);
        Rng rng = make_rng(seed, i);
        const auto planes = sample_antiholomorphic_planes(r.point, samples, rng);
        rep.nu_per_point.push_back(constancy(r, planes).mean);
    }
    const auto [lo, hi] = std::minmax_element(rep.nu_per_point.begin(), rep.nu_per_point.end());
    rep.spread = *hi - *lo;
    return rep;
}

HermitianPoint random_hermitian_point(int m, Rng& rng) {
    const int n = 2 * m;
    const HermitianPoint std_point = HermitianPoint::standard(m);
    // spectral norm of the perturbation stays near 1/2, so cond(A) is small
    Matrix a = Matrix::Identity(n, n) + (0.25 / std::sqrt(double(n))) * gaussian_matrix(n, n, rng);
    const Matrix ainv = a.inverse();
    Matrix J = a * std_point.J() * ainv;
    Matrix g = ainv.transpose() * ainv;
    g = (0.5 * (g + g.transpose())).eval();
    return HermitianPoint(std::move(g), std::move(J), 1e-8);
}

Bilinear random_j_invariant_form(const HermitianPoint& point, Rng& rng) {
    const int n = point.dim();
    Matrix a = gaussian_matrix(n, n, rng);
    a = (0.5 * (a + a.transpose())).eval();
    Matrix s = a + point.J().transpose() * a * point.J();
    s = (0.5 * (s + s.transpose())).eval();
    return Bilinear(point, s);
}

}  // namespace ahgeom
