#include <fmt/format.h>

#include <ostream>

#include "ahgeom/report.hpp"

namespace ahgeom {

namespace {

struct Check {
    std::string name;
    double worst = 0.0;
    double limit = 0.0;

    bool pass() const { return worst < limit; }
};

Check psi_of_metric(Rng& rng) {
    Check c{"psi(g) = 2 pi2, m = 1..3", 0.0, 1e-12};
    for (int m = 1; m <= 3; ++m)
        for (int trial = 0; trial < 4; ++trial) {
            const HermitianPoint p = trial == 0 ? HermitianPoint::standard(m) : random_hermitian_point(m, rng);
            // pi2 written out: w(a,d) w(b,c) - w(a,c) w(b,d) - 2 w(a,b) w(c,d), w = gJ
            const Matrix w = p.g() * p.J();
            const Tensor4 lhs = psi(Bilinear{p, p.g()}).values;
            const int n = p.dim();
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    for (int x = 0; x < n; ++x)
                        for (int d = 0; d < n; ++d) {
                            const double two_pi2 =
                                2.0 * (w(a, d) * w(b, x) - w(a, x) * w(b, d) - 2.0 * w(a, b) * w(x, d));
                            c.worst = std::max(c.worst, std::abs(lhs(a, b, x, d) - two_pi2));
                        }
        }
    return c;
}

Check psi_symmetries(Rng& rng) {
    Check c{"psi(Q) curvature-type symmetries, Q symmetric J-invariant", 0.0, 1e-12};
    for (int m = 1; m <= 3; ++m)
        for (int trial = 0; trial < 8; ++trial) {
            const HermitianPoint p = random_hermitian_point(m, rng);
            const CurvatureTensor r = psi(random_j_invariant_form(p, rng));
            c.worst = std::max(c.worst, riemann_symmetry_residual(r) / std::max(1.0, r.values.max_abs()));
        }
    return c;
}

Check forward_constancy(Rng& rng, const SelftestOptions& opts) {
    Check c{fmt::format("antiholomorphic constancy of the decomposition, {} instances", opts.instances), 0.0, 1e-10};
    std::uniform_real_distribution<double> nu_dist(-2.0, 2.0);
    for (int i = 0; i < opts.instances; ++i) {
        const int m = 2 + i % 2;
        const HermitianPoint p = random_hermitian_point(m, rng);
        const Bilinear s = random_j_invariant_form(p, rng);
        const double nu = nu_dist(rng);
        const CurvatureTensor r = build_from_decomposition(s, nu);
        for (const Plane& plane : sample_antiholomorphic_planes(p, opts.planes, rng))
            c.worst = std::max(c.worst, std::abs(sectional_curvature(r, plane) - nu));
    }
    return c;
}

Check eigenframe(Rng& rng) {
    Check c{"adapted eigenframe reconstruction", 0.0, 1e-9};
    for (int m = 1; m <= 4; ++m)
        for (int trial = 0; trial < 10; ++trial) {
            const HermitianPoint p = random_hermitian_point(m, rng);
            const Bilinear s = random_j_invariant_form(p, rng);
            const SpectralFrame f = adapted_eigenframe(s);
            c.worst = std::max(c.worst, eigenframe_reconstruction(f, s).cwiseAbs().maxCoeff());
        }
    return c;
}

Check fit_exactness(Rng& rng) {
    Check c{"span{pi1, pi2} fit recovers its coefficients", 0.0, 1e-10};
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    for (int m = 2; m <= 3; ++m)
        for (int trial = 0; trial < 10; ++trial) {
            const HermitianPoint p = random_hermitian_point(m, rng);
            const double a = coef(rng), b = coef(rng);
            const PiSpanFit fit = fit_pi_span(a * pi1(p) + b * pi2(p));
            c.worst = std::max({c.worst, std::abs(fit.a - a), std::abs(fit.b - b), fit.residual});
        }
    return c;
}

Check real_form_verdicts() {
    Check c{"classify(c pi1) = RealSpaceForm(c)", 0.0, 1e-12};
    const HermitianPoint p = HermitianPoint::standard(3);
    const ClassResiduals flat{};
    for (double k : {-1.0, 0.0, 1.0, 2.5}) {
        const CurvatureTensor r = k * pi1(p);
        const CurvatureStats s{2, k, 0.0, PlaneKind::Generic};
        const Verdict v = classify(r, Bilinear{p, 5.0 * k * p.g()}, flat, s, s, 1e-9);
        c.worst = std::max(c.worst, v.kind == VerdictKind::RealSpaceForm ? std::abs(v.constant - k) : 1.0);
    }
    return c;
}

}  // namespace

int run_selftest(std::ostream& out, const SelftestOptions& opts) {
    Rng rng = make_rng(opts.seed);
    std::vector<Check> checks;
    checks.push_back(psi_of_metric(rng));
    checks.push_back(psi_symmetries(rng));
    checks.push_back(forward_constancy(rng, opts));
    checks.push_back(eigenframe(rng));
    checks.push_back(fit_exactness(rng));
    checks.push_back(real_form_verdicts());

    int failed = 0;
    for (const Check& c : checks) {
        out << fmt::format("{} {}  (worst {:.3g}, limit {:.0e})\n", c.pass() ? "ok  " : "FAIL", c.name, c.worst,
                           c.limit);
        failed += c.pass() ? 0 : 1;
    }
    out << fmt::format("{} of {} checks passed\n", checks.size() - static_cast<std::size_t>(failed), checks.size());
    return failed == 0 ? 0 : 1;
}

}  // namespace ahgeom
