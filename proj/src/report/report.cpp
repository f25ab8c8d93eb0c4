#include "ahgeom/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <future>

namespace ahgeom {

namespace {

ResidualFlag flag(double residual, double tol) { return ResidualFlag{residual, residual <= tol}; }

std::string g12(double v) { return fmt::format("{:.12g}", v); }

std::string pass_word(bool pass) { return pass ? "pass" : "fail"; }

}  // namespace

ClassFlags PointReport::flags() const {
    return ClassFlags{kahler.pass, nearly_kahler.pass, almost_kahler.pass, ah1.pass, ah2.pass, ah3.pass};
}

bool AnalysisReport::has_errors() const {
    return std::any_of(points.begin(), points.end(), [](const PointReport& p) { return p.error.has_value(); });
}

PointReport analyze_point(const MetricSource& src, const Vector& p, std::size_t index, const AnalysisOptions& opts) {
    PointReport pr;
    pr.point = p;
    try {
        const PointGeometry geo = point_geometry(src, p, opts.fd);
        const CurvatureTensor& r = geo.curvature;
        const double tol = opts.tol;

        const ClassResiduals cr = class_residuals(geo.point, geo.nabla_j);
        pr.kahler = flag(cr.kahler, tol);
        pr.nearly_kahler = flag(cr.nearly_kahler, tol);
        pr.almost_kahler = flag(cr.almost_kahler, tol);
        pr.ah1 = flag(ah_identity_residual(r, AhIdentity::One), tol);
        pr.ah2 = flag(ah_identity_residual(r, AhIdentity::Two), tol);
        pr.ah3 = flag(ah_identity_residual(r, AhIdentity::Three), tol);

        pr.einstein = einstein_residual(geo.ricci);

        Rng rng = make_rng(opts.seed, index);
        if (src.m() >= 2) pr.antiholomorphic = constancy(r, sample_antiholomorphic_planes(geo.point, opts.samples, rng));
        pr.holomorphic = constancy(r, sample_holomorphic_planes(geo.point, opts.samples, rng));

        pr.bianchi = bianchi2_residual(geo.nabla_r);
        pr.riemann_symmetry = riemann_symmetry_residual(r);
        pr.gray_ak2 = gray_ak2_residual(r, geo.nabla_j);

        if (pr.antiholomorphic) {
            const double nu = pr.antiholomorphic->mean;
            try {
                pr.decomposition = decomposition_residual(r, geo.ricci, nu, tol);
            } catch (const Error&) {
            }
            try {
                const SpectralFrame frame = adapted_eigenframe(geo.ricci, EigenframeOptions{tol, tol});
                pr.ricci_eigenvalues = frame.eigenvalues;
                pr.frame_relation = frame_relation_residual(frame, geo.point, geo.nabla_s, geo.nabla_j, nu);
            } catch (const Error&) {
            }
        }

        pr.verdict = classify(r, geo.ricci, cr, pr.holomorphic, pr.antiholomorphic, tol);
    } catch (const std::exception& e) {
        pr.error = e.what();
    }
    return pr;
}

std::vector<std::string> check_expectation(const PointReport& pr, const ModelExpectation& ex,
                                           const AnalysisOptions& opts) {
    std::vector<std::string> fails;
    if (pr.error) {
        fails.push_back("analysis failed: " + *pr.error);
        return fails;
    }
    const double etol = opts.expectation_tol;
    auto check_flag = [&](const char* name, const ResidualFlag& got, bool want) {
        if (got.pass != want)
            fails.push_back(fmt::format("{}: expected {}, residual {}", name, pass_word(want), g12(got.residual)));
    };
    check_flag("K", pr.kahler, ex.flags.kahler);
    check_flag("NK", pr.nearly_kahler, ex.flags.nearly_kahler);
    check_flag("AK", pr.almost_kahler, ex.flags.almost_kahler);
    check_flag("AH1", pr.ah1, ex.flags.ah1);
    check_flag("AH2", pr.ah2, ex.flags.ah2);
    check_flag("AH3", pr.ah3, ex.flags.ah3);
    if (auto v = pr.flags().lattice_violation()) fails.push_back("class lattice violated: " + *v);

    auto check_constant = [&](const char* name, const std::optional<CurvatureStats>& got, double want) {
        if (!got) {
            fails.push_back(fmt::format("{} curvature: expected {}, not measured", name, g12(want)));
        } else if (std::abs(got->mean - want) > etol || got->max_deviation > opts.tol) {
            fails.push_back(fmt::format("{} curvature: expected constant {}, mean {} max_deviation {}", name,
                                        g12(want), g12(got->mean), g12(got->max_deviation)));
        }
    };
    if (ex.antiholomorphic) check_constant("antiholomorphic", pr.antiholomorphic, *ex.antiholomorphic);
    if (ex.holomorphic) check_constant("holomorphic", pr.holomorphic, *ex.holomorphic);

    if (ex.einstein) {
        if (std::abs(pr.einstein.lambda - *ex.einstein) > etol || pr.einstein.residual > opts.tol)
            fails.push_back(fmt::format("einstein: expected {}, lambda {} residual {}", g12(*ex.einstein),
                                        g12(pr.einstein.lambda), g12(pr.einstein.residual)));
    } else if (pr.einstein.residual <= opts.tol) {
        fails.push_back(fmt::format("einstein: expected non-Einstein, residual {}", g12(pr.einstein.residual)));
    }

    const Verdict& v = pr.verdict;
    if (v.kind != ex.verdict) {
        fails.push_back(fmt::format("verdict: expected {}, got {}", to_string(ex.verdict), describe(v)));
    } else if (v.has_constant() && std::abs(v.constant - ex.verdict_constant) > etol) {
        fails.push_back(fmt::format("verdict: expected constant {}, got {}", g12(ex.verdict_constant), describe(v)));
    }
    return fails;
}

AnalysisReport analyze(const MetricSource& src, const std::vector<Vector>& points, const AnalysisOptions& opts,
                       const std::optional<ModelExpectation>& expected, std::string source_kind) {
    AnalysisReport rep;
    rep.source_kind = std::move(source_kind);
    rep.source_name = src.name();
    rep.m = src.m();
    rep.options = opts;

    std::vector<std::future<PointReport>> jobs;
    jobs.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        jobs.push_back(std::async(std::launch::async, [&src, &points, &opts, i] {
            return analyze_point(src, points[i], i, opts);
        }));
    for (auto& j : jobs) rep.points.push_back(j.get());

    std::vector<const PointReport*> ok;
    for (const auto& p : rep.points)
        if (!p.error) ok.push_back(&p);

    GlobalReport& gl = rep.global;
    if (ok.size() >= 2 && src.m() >= 2) {
        SchurReport s;
        s.applies = src.m() > 2;
        for (const auto* p : ok) s.nu_per_point.push_back(p->antiholomorphic->mean);
        const auto [lo, hi] = std::minmax_element(s.nu_per_point.begin(), s.nu_per_point.end());
        s.spread = *hi - *lo;
        gl.schur = s;
    }

    if (!ok.empty()) {
        Verdict overall = ok.front()->verdict;
        bool same = true;
        double sum = 0.0, lo = overall.constant, hi = overall.constant;
        for (const auto* p : ok) {
            const Verdict& v = p->verdict;
            same = same && v.kind == overall.kind;
            sum += v.constant;
            lo = std::min(lo, v.constant);
            hi = std::max(hi, v.constant);
            overall.ah3_residual = std::max(overall.ah3_residual, v.ah3_residual);
            overall.antiholomorphic_deviation = std::max(overall.antiholomorphic_deviation, v.antiholomorphic_deviation);
            overall.kahler_residual = std::max(overall.kahler_residual, v.kahler_residual);
            overall.einstein_residual = std::max(overall.einstein_residual, v.einstein_residual);
            overall.fit.residual = std::max(overall.fit.residual, v.fit.residual);
        }
        if (same && overall.has_constant() && hi - lo > opts.tol) same = false;
        if (!same) {
            overall.kind = VerdictKind::Inconclusive;
            overall.constant = 0.0;
        } else if (overall.has_constant()) {
            overall.constant = sum / static_cast<double>(ok.size());
        }
        gl.overall = overall;
        gl.consistent = same;
    }

    if (expected) {
        bool all = true;
        for (auto& p : rep.points) {
            p.expectation_failures = check_expectation(p, *expected, opts);
            all = all && p.expectation_failures.empty();
        }
        gl.expectations_pass = all;
    }
    return rep;
}

int exit_code(const AnalysisReport& report) {
    if (report.points.empty() || report.has_errors()) return 2;
    if (report.global.expectations_pass && !*report.global.expectations_pass) return 1;
    return 0;
}

namespace {

using Json = nlohmann::ordered_json;

Json stats_json(const CurvatureStats& s) {
    return Json{{"samples", s.samples}, {"mean", s.mean}, {"max_deviation", s.max_deviation}};
}

template <class T>
Json opt_json(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

Json verdict_json(const Verdict& v) {
    Json j;
    j["kind"] = to_string(v.kind);
    j["constant"] = v.has_constant() ? Json(v.constant) : Json(nullptr);
    j["fit"] = Json{{"a", v.fit.a}, {"b", v.fit.b}, {"residual", v.fit.residual}, {"degenerate", v.fit.degenerate}};
    j["ah3_residual"] = v.ah3_residual;
    j["antiholomorphic_deviation"] = v.antiholomorphic_deviation;
    j["kahler_residual"] = v.kahler_residual;
    j["einstein_residual"] = v.einstein_residual;
    return j;
}

Json flag_json(const ResidualFlag& f) { return Json{{"residual", f.residual}, {"pass", f.pass}}; }

}  // namespace

nlohmann::ordered_json to_json(const AnalysisReport& report) {
    Json out;
    const AnalysisOptions& o = report.options;
    out["meta"] = Json{
        {"tool", "ahgeom"},
        {"source", Json{{"kind", report.source_kind}, {"name", report.source_name}}},
        {"m", report.m},
        {"tol", o.tol},
        {"expectation_tol", o.expectation_tol},
        {"fd_step", o.fd.step},
        {"fd_order", static_cast<int>(o.fd.order)},
        {"samples", o.samples},
        {"seed", o.seed},
    };

    Json pts = Json::array();
    for (std::size_t i = 0; i < report.points.size(); ++i) {
        const PointReport& p = report.points[i];
        Json j;
        j["index"] = i;
        j["point"] = std::vector<double>(p.point.data(), p.point.data() + p.point.size());
        if (p.error) {
            j["error"] = *p.error;
        } else {
            j["classes"] = Json{
                {"K", flag_json(p.kahler)},   {"NK", flag_json(p.nearly_kahler)}, {"AK", flag_json(p.almost_kahler)},
                {"AH1", flag_json(p.ah1)},    {"AH2", flag_json(p.ah2)},          {"AH3", flag_json(p.ah3)},
            };
            j["einstein"] = Json{{"lambda", p.einstein.lambda}, {"residual", p.einstein.residual}};
            j["holomorphic"] = stats_json(p.holomorphic);
            j["antiholomorphic"] = p.antiholomorphic ? stats_json(*p.antiholomorphic) : Json(nullptr);
            j["decomposition_residual"] = opt_json(p.decomposition);
            j["bianchi_residual"] = p.bianchi;
            j["riemann_symmetry_residual"] = p.riemann_symmetry;
            j["gray_ak2_residual"] = p.gray_ak2;
            j["ricci_eigenvalues"] = opt_json(p.ricci_eigenvalues);
            j["frame_relation_residual"] = opt_json(p.frame_relation);
            j["verdict"] = verdict_json(p.verdict);
        }
        if (report.global.expectations_pass)
            j["expectations"] = Json{{"pass", p.expectation_failures.empty()}, {"failures", p.expectation_failures}};
        pts.push_back(std::move(j));
    }
    out["points"] = std::move(pts);

    Json gl;
    const GlobalReport& g = report.global;
    if (g.schur)
        gl["schur"] = Json{{"applies", g.schur->applies}, {"nu_per_point", g.schur->nu_per_point},
                           {"spread", g.schur->spread}};
    else
        gl["schur"] = nullptr;
    gl["overall_verdict"] = verdict_json(g.overall);
    gl["consistent"] = g.consistent;
    gl["expectations_pass"] = opt_json(g.expectations_pass);
    gl["exit_code"] = exit_code(report);
    out["global"] = std::move(gl);
    return out;
}

std::string to_text(const AnalysisReport& report) {
    const AnalysisOptions& o = report.options;
    std::string t;
    auto line = [&t](std::string s) {
        t += s;
        t += '\n';
    };
    line(fmt::format("{} {} (m = {})", report.source_kind, report.source_name, report.m));
    line(fmt::format("tol {}  fd step {} (order {})  samples {}  seed {}", g12(o.tol), g12(o.fd.step),
                     static_cast<int>(o.fd.order), o.samples, o.seed));

    for (std::size_t i = 0; i < report.points.size(); ++i) {
        const PointReport& p = report.points[i];
        line("");
        line(fmt::format("point {}: {}", i, format_point(p.point)));
        if (p.error) {
            line("  error: " + *p.error);
        } else {
            for (auto [name, f] : {std::pair{"K", &p.kahler}, std::pair{"NK", &p.nearly_kahler},
                                   std::pair{"AK", &p.almost_kahler}, std::pair{"AH1", &p.ah1},
                                   std::pair{"AH2", &p.ah2}, std::pair{"AH3", &p.ah3}})
                line(fmt::format("  {:<4} {}  residual {}", name, pass_word(f->pass), g12(f->residual)));
            line(fmt::format("  einstein         lambda {}  residual {}", g12(p.einstein.lambda),
                             g12(p.einstein.residual)));
            line(fmt::format("  holomorphic      mean {}  max_deviation {}  samples {}", g12(p.holomorphic.mean),
                             g12(p.holomorphic.max_deviation), p.holomorphic.samples));
            if (p.antiholomorphic)
                line(fmt::format("  antiholomorphic  mean {}  max_deviation {}  samples {}",
                                 g12(p.antiholomorphic->mean), g12(p.antiholomorphic->max_deviation),
                                 p.antiholomorphic->samples));
            else
                line("  antiholomorphic  none (m = 1)");
            auto opt = [](const std::optional<double>& v) { return v ? g12(*v) : std::string("n/a"); };
            line("  decomposition    " + opt(p.decomposition));
            line("  bianchi          " + g12(p.bianchi));
            line("  riemann symmetry " + g12(p.riemann_symmetry));
            line("  gray AK2         " + g12(p.gray_ak2));
            if (p.ricci_eigenvalues) {
                std::string ev;
                for (double v : *p.ricci_eigenvalues) ev += (ev.empty() ? "" : " ") + g12(v);
                line("  ricci spectrum   " + ev);
            }
            line("  frame relation   " + opt(p.frame_relation));
            line("  verdict          " + describe(p.verdict));
        }
        if (report.global.expectations_pass) {
            if (p.expectation_failures.empty()) line("  expected         ok");
            for (const auto& f : p.expectation_failures) line("  MISMATCH " + f);
        }
    }

    const GlobalReport& g = report.global;
    line("");
    line("global");
    if (g.schur) {
        std::string nus;
        for (double v : g.schur->nu_per_point) nus += (nus.empty() ? "" : " ") + g12(v);
        line(fmt::format("  schur spread {}  (m > 2: {})  nu {}", g12(g.schur->spread),
                         g.schur->applies ? "yes" : "no", nus));
    }
    line("  overall verdict " + describe(g.overall) + (g.consistent ? "" : "  (points disagree)"));
    if (g.expectations_pass) line(std::string("  expectations ") + (*g.expectations_pass ? "pass" : "FAIL"));
    return t;
}

std::string models_table() {
    std::string t = fmt::format("{:<7} {:>2}  {:<28} {:>6} {:>6} {:>8}  {}\n", "name", "m", "expected verdict", "nu",
                                "holo", "einstein", "description");
    auto opt = [](const std::optional<double>& v) { return v ? g12(*v) : std::string("-"); };
    for (const auto& name : model_names()) {
        const ModelDescriptor md = model_by_name(name);
        const auto& ex = md.expected;
        std::string verdict = to_string(ex.verdict);
        if (ex.verdict == VerdictKind::RealSpaceForm || ex.verdict == VerdictKind::ComplexSpaceForm)
            verdict += "(" + g12(ex.verdict_constant) + ")";
        t += fmt::format("{:<7} {:>2}  {:<28} {:>6} {:>6} {:>8}  {}\n", md.name, md.source->m(), verdict,
                         opt(ex.antiholomorphic), opt(ex.holomorphic), opt(ex.einstein), md.description);
    }
    return t;
}

}  // namespace ahgeom
