#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ahgeom/models.hpp"
#include "support.hpp"

using namespace ahgeom;
using namespace ahgeom::testing;

namespace {

const std::vector<std::string> kXY{"x", "y"};

double eval(const std::string& text, double x = 0.0, double y = 0.0) {
    const std::array<double, 2> vars{x, y};
    return parse_expression(text, kXY).evaluate(vars);
}

SyntaxIssue chart_issue(const std::string& text) {
    try {
        parse_chart(text);
    } catch (const ChartError& e) {
        return e.issue();
    }
    ADD_FAILURE() << "no error for:\n" << text;
    return {};
}

const char* kFlat1 = R"(# flat plane
dim = 1
coords = x y
g[1][1] = 1
g[2][2] = 1
J[2][1] = 1
J[1][2] = -1
)";

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Christoffel symbols of the Kaehler ball metric from closed-form derivatives.
///   g = N / D^2, N = D I - k (a a^T + b b^T), D = 1 + k |p|^2, a = p, b = J0 p
///   d_m N = 2 k p_m I - k (e_m a^T + a e_m^T + (J0 e_m) b^T + b (J0 e_m)^T)
///   d_m g = d_m N / D^2 - 4 k p_m N / D^3
Tensor3 kaehler_ball_gamma(const Vector& p, double k) {
    const int n = static_cast<int>(p.size());
    const Matrix J0 = HermitianPoint::standard(n / 2).J();
    const Vector a = p, b = J0 * p;
    const double d = 1.0 + k * p.squaredNorm();
    const Matrix nn = d * Matrix::Identity(n, n) - k * (a * a.transpose() + b * b.transpose());
    const Matrix g = nn / (d * d);
    std::vector<Matrix> dg;
    for (int m = 0; m < n; ++m) {
        const Vector em = Vector::Unit(n, m);
        const Vector jem = J0 * em;
        const Matrix dn = 2.0 * k * p[m] * Matrix::Identity(n, n) -
                          k * (em * a.transpose() + a * em.transpose() + jem * b.transpose() + b * jem.transpose());
        dg.push_back(dn / (d * d) - 4.0 * k * p[m] * nn / (d * d * d));
    }
    const Matrix gi = g.inverse();
    Tensor3 gamma(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int kk = 0; kk < n; ++kk) {
                double s = 0.0;
                for (int l = 0; l < n; ++l) s += gi(i, l) * (dg[j](l, kk) + dg[kk](l, j) - dg[l](j, kk));
                gamma(i, j, kk) = 0.5 * s;
            }
    return gamma;
}

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    int i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

}  // namespace

// ---- expressions

TEST(Expression, PrecedenceAndAssociativity) {
    EXPECT_DOUBLE_EQ(7.0, eval("1 + 2 * 3"));
    EXPECT_DOUBLE_EQ(9.0, eval("(1 + 2) * 3"));
    EXPECT_DOUBLE_EQ(512.0, eval("2 ^ 3 ^ 2"));
    EXPECT_DOUBLE_EQ(-4.0, eval("-2 ^ 2"));
    EXPECT_DOUBLE_EQ(0.25, eval("2 ^ -2"));
    EXPECT_DOUBLE_EQ(1.0, eval("8 / 4 / 2"));
    EXPECT_DOUBLE_EQ(-1.0, eval("1 - 1 - 1"));
    EXPECT_DOUBLE_EQ(2.5e-3, eval("2.5e-3"));
    EXPECT_DOUBLE_EQ(3.0, eval("--3"));
}

TEST(Expression, VariablesAndFunctions) {
    EXPECT_DOUBLE_EQ(std::sin(0.3) * std::exp(-0.2), eval("sin(x) * exp(y)", 0.3, -0.2));
    EXPECT_DOUBLE_EQ(std::atan(2.0) + std::sqrt(4.0) + std::log(2.0) + std::tan(0.1) + std::cos(1.0),
                     eval("atan(2) + sqrt(4) + log(2) + tan(0.1) + cos(1)"));
    EXPECT_DOUBLE_EQ(1.0 / (1.0 + 0.25 * (0.09 + 0.16)), eval("1/(1 + 0.25*(x^2 + y^2))", 0.3, 0.4));
}

TEST(Expression, UndefinedValuesAreReported) {
    const std::array<double, 2> vars{-1.0, 0.0};
    const Expr e = parse_expression("log(x)", kXY);
    double out = 0.0;
    std::string where;
    EXPECT_FALSE(e.evaluate_checked(vars, out, where));
    EXPECT_NE(std::string::npos, where.find("log"));
}

TEST(Expression, Errors) {
    auto issue = [](const std::string& text) {
        try {
            parse_expression(text, kXY, 3, 10);
        } catch (const ChartError& e) {
            return e.issue();
        }
        return SyntaxIssue{SyntaxIssue::Kind::Missing, 0, 0, "no error"};
    };
    EXPECT_EQ(SyntaxIssue::Kind::UndeclaredIdentifier, issue("x + x9").kind);
    EXPECT_NE(std::string::npos, issue("x + x9").message.find("x9"));
    EXPECT_EQ(15, issue("x + x9").column);
    EXPECT_EQ(3, issue("x + x9").line);
    EXPECT_EQ(SyntaxIssue::Kind::Syntax, issue("(x + 1").kind);
    EXPECT_EQ(SyntaxIssue::Kind::Syntax, issue("x +").kind);
    EXPECT_EQ(SyntaxIssue::Kind::Syntax, issue("").kind);
    EXPECT_EQ(SyntaxIssue::Kind::Syntax, issue("sin x").kind);
    EXPECT_EQ(SyntaxIssue::Kind::Syntax, issue("1.2.3").kind);
    EXPECT_EQ(SyntaxIssue::Kind::Syntax, issue("x $ y").kind);
    EXPECT_EQ(SyntaxIssue::Kind::UndeclaredIdentifier, issue("cosh(x)").kind);
    EXPECT_EQ(SyntaxIssue::Kind::Syntax, issue(std::string(1000, '(') + "x" + std::string(1000, ')')).kind);
}

TEST(Expression, PrintReparsesToEqualTree) {
    for (const char* text : {"1 + 2 * 3", "(1 + 2) * 3", "2 ^ 3 ^ 2", "(2 ^ 3) ^ 2", "-x ^ 2", "(-x) ^ 2", "x - (y - 1)",
                             "x / (y / 2)", "-(x + y)", "2 ^ -x", "sin(-x) * -3", "1e-07 * x", "x * y * (x - y)"}) {
        const Expr e = parse_expression(text, kXY);
        const std::string printed = e.to_string(kXY);
        EXPECT_EQ(e, parse_expression(printed, kXY)) << text << " -> " << printed;
    }
}

TEST(Expression, ParsingIsTotal) {
    // random byte strings over the expression alphabet either parse or raise ChartError
    std::mt19937_64 rng(99);
    const std::string alphabet = "xy0123456789.+-*/^() esincoqrtlgap";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::uniform_int_distribution<int> len(0, 24);
    int parsed = 0;
    for (int i = 0; i < 20000; ++i) {
        std::string s;
        const int n = len(rng);
        for (int k = 0; k < n; ++k) s += alphabet[pick(rng)];
        try {
            const Expr e = parse_expression(s, kXY);
            EXPECT_EQ(e, parse_expression(e.to_string(kXY), kXY)) << s;
            ++parsed;
        } catch (const ChartError&) {
        }
    }
    EXPECT_GT(parsed, 100);
}

// ---- chart files

TEST(ParseChart, MinimalFlatChart) {
    const ChartSpec spec = parse_chart(kFlat1);
    EXPECT_EQ(1, spec.m);
    EXPECT_EQ((std::vector<std::string>{"x", "y"}), spec.coord_names);
    EXPECT_TRUE(spec.default_points.empty());
    const HermitianPoint p = eval_point(spec, Vector::Zero(2));
    EXPECT_EQ(Matrix::Identity(2, 2), p.g());
    EXPECT_EQ(HermitianPoint::standard(1).J(), p.J());
}

TEST(ParseChart, SymmetricEntriesAreFilled) {
    const ChartSpec spec = parse_chart(R"(dim = 1
coords = u v
g[1][1] = 2
g[1][2] = 0.5 * u
g[2][2] = 2
J[2][1] = 1
J[1][2] = -1
)");
    EXPECT_TRUE(spec.metric[2].has_value());
    EXPECT_EQ(spec.metric[1], spec.metric[2]);
    // the same expression twice is accepted
    EXPECT_NO_THROW(parse_chart(std::string(kFlat1) + "g[2][1] = 0\ng[1][2] = 0\n"));
}

TEST(ParseChart, Diagnostics) {
    const SyntaxIssue undeclared = chart_issue(std::string(kFlat1) + "g[1][2] = x9\n");
    EXPECT_EQ(SyntaxIssue::Kind::UndeclaredIdentifier, undeclared.kind);
    EXPECT_NE(std::string::npos, undeclared.message.find("x9"));
    EXPECT_EQ(8, undeclared.line);
    EXPECT_EQ(11, undeclared.column);

    EXPECT_EQ(SyntaxIssue::Kind::DimensionMismatch, chart_issue("dim = 2\ncoords = x y\n").kind);
    EXPECT_EQ(SyntaxIssue::Kind::DimensionMismatch, chart_issue(std::string(kFlat1) + "g[3][1] = 1\n").kind);
    EXPECT_EQ(SyntaxIssue::Kind::DimensionMismatch, chart_issue(std::string(kFlat1) + "point = 1 2 3\n").kind);
    EXPECT_EQ(SyntaxIssue::Kind::Conflict, chart_issue(std::string(kFlat1) + "g[1][2] = 1\ng[2][1] = 2\n").kind);
    EXPECT_EQ(SyntaxIssue::Kind::Conflict, chart_issue("dim = 1\ncoords = x x\n").kind);
    EXPECT_EQ(SyntaxIssue::Kind::Conflict, chart_issue("dim = 1\ncoords = x sin\n").kind);
    EXPECT_EQ(SyntaxIssue::Kind::Missing, chart_issue("coords = x y\n").kind);
    EXPECT_EQ(SyntaxIssue::Kind::Missing, chart_issue("dim = 1\n").kind);
    EXPECT_EQ(SyntaxIssue::Kind::Syntax, chart_issue(std::string(kFlat1) + "metric = 1\n").kind);
    EXPECT_EQ(SyntaxIssue::Kind::Syntax, chart_issue(std::string(kFlat1) + "g[1[1] = 1\n").kind);
    EXPECT_EQ(SyntaxIssue::Kind::Syntax, chart_issue(std::string(kFlat1) + "g[1][1] = (1\n").kind);
    EXPECT_EQ(SyntaxIssue::Kind::Value, chart_issue(std::string(kFlat1) + "domain x = 1 -1\n").kind);
    EXPECT_EQ(SyntaxIssue::Kind::Value,
              chart_issue(std::string(kFlat1) + "domain x = -1 1\npoint = 2 0\n").kind);
    EXPECT_EQ(SyntaxIssue::Kind::Syntax, chart_issue("dim = one\ncoords = x y\n").kind);
}

TEST(ParseChart, ErrorMessageCarriesPosition) {
    try {
        parse_chart(std::string(kFlat1) + "g[1][2] = x9\n");
        FAIL();
    } catch (const ChartError& e) {
        EXPECT_NE(std::string::npos, std::string(e.what()).find("line 8, column 11"));
    }
}

TEST(ParseChart, TotalOnMutatedFiles) {
    const std::string base = read_file(std::filesystem::path(AHGEOM_MODELS_DIR) / "cp2.ahm");
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> byte(0, 127);
    for (int i = 0; i < 3000; ++i) {
        std::string s = base;
        const int edits = 1 + i % 5;
        for (int e = 0; e < edits; ++e) {
            const std::size_t pos = std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng);
            switch (e % 3) {
                case 0: s[pos] = static_cast<char>(byte(rng)); break;
                case 1: s.erase(pos, 1); break;
                default: s.insert(pos, 1, static_cast<char>(byte(rng)));
            }
        }
        try {
            parse_chart(s);
        } catch (const ChartError& e) {
            EXPECT_GE(e.issue().line, 1);
        }
    }
}

TEST(ParseChart, BundledFilesRoundTrip) {
    int count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(AHGEOM_MODELS_DIR)) {
        if (entry.path().extension() != ".ahm") continue;
        ++count;
        const ChartSpec spec = parse_chart(read_file(entry.path()));
        const ChartSpec again = parse_chart(serialize_chart(spec));
        EXPECT_EQ(spec, again) << entry.path();
        const ModelDescriptor md = model_by_name(entry.path().stem().string());
        ASSERT_TRUE(md.chart.has_value());
        EXPECT_EQ(*md.chart, spec) << "bundled file is stale: " << entry.path();
    }
    EXPECT_EQ(7, count);
}

TEST(EvalPoint, Errors) {
    const ChartSpec bad_j = parse_chart(std::string(kFlat1) + "J[1][1] = 2\n");
    try {
        eval_point(bad_j, Vector::Zero(2));
        FAIL();
    } catch (const InvariantError& e) {
        EXPECT_EQ(InvariantFailure::NotComplexStructure, e.failure());
    }
    const ChartSpec boxed = parse_chart(std::string(kFlat1) + "domain x = -1 1\n");
    EXPECT_THROW(eval_point(boxed, vec({1.5, 0.0})), DomainError);
    EXPECT_THROW(eval_point(boxed, vec({0.0, 0.0, 0.0})), DimensionError);
    const ChartSpec logs = parse_chart(std::string(kFlat1) + "g[1][2] = log(x)\n");
    try {
        eval_point(logs, vec({-1.0, 0.0}));
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_NE(std::string::npos, std::string(e.what()).find("log(x)"));
    }
}

TEST(EvalPoint, FubiniStudyAtOriginIsIdentity) {
    const ModelDescriptor md = model_fubini_study(2, 4.0);
    const HermitianPoint p = eval_point(*md.chart, Vector::Zero(4));
    EXPECT_EQ(Matrix::Identity(4, 4), p.g());
}

// ---- calculus

TEST(Christoffel, FlatChartVanishes) {
    const ExprChart flat(*model_flat(2).chart);
    EXPECT_LT(christoffel(flat, vec({0.3, -0.2, 0.1, 0.4})).gamma.max_abs(), 1e-10);
}

TEST(Christoffel, MatchesClosedFormOnFubiniStudy) {
    const ModelDescriptor md = model_fubini_study(2, 4.0);
    for (const Vector& p : {vec({0.3, -0.2, 0.5, 0.1}), vec({-0.7, 0.4, 0.2, -0.9})}) {
        const ConnectionData cd = christoffel(*md.source, p);
        EXPECT_LT(max_abs_diff(cd.gamma, kaehler_ball_gamma(p, 1.0)), 1e-7);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                for (int k = 0; k < 4; ++k) EXPECT_EQ(cd.gamma(i, j, k), cd.gamma(i, k, j));
    }
    const ModelDescriptor ch = model_complex_hyperbolic(2, -4.0);
    const Vector q = vec({0.1, 0.2, -0.15, 0.05});
    EXPECT_LT(max_abs_diff(christoffel(*ch.source, q).gamma, kaehler_ball_gamma(q, -1.0)), 1e-7);
}

TEST(Christoffel, FiniteDifferencesConverge) {
    const ModelDescriptor md = model_fubini_study(2, 4.0);
    const Vector p = vec({0.3, -0.2, 0.5, 0.1});
    const Tensor3 exact = kaehler_ball_gamma(p, 1.0);
    for (FdOrder order : {FdOrder::Second, FdOrder::Fourth}) {
        const double e1 = max_abs_diff(christoffel(*md.source, p, {1e-2, order}).gamma, exact);
        const double e2 = max_abs_diff(christoffel(*md.source, p, {5e-3, order}).gamma, exact);
        EXPECT_GT(e1 / e2, order == FdOrder::Second ? 3.5 : 14.0) << static_cast<int>(order);
    }
}

TEST(Christoffel, StencilMustFitDomain) {
    const ChartSpec boxed = parse_chart(std::string(kFlat1) + "domain x = -1 1\n");
    const ExprChart chart(boxed);
    EXPECT_THROW(christoffel(chart, vec({0.9995, 0.0})), DomainError);
    EXPECT_NO_THROW(christoffel(chart, vec({0.9, 0.0})));
}

TEST(Riemann, FlatChartVanishes) {
    const ExprChart flat(*model_flat(2).chart);
    EXPECT_LT(riemann(flat, vec({0.3, -0.2, 0.1, 0.4})).values.max_abs(), 1e-8);
}

TEST(Riemann, RoundSphereFactor) {
    // one factor of S^2(2): curvature 1/4
    const ChartSpec s2 = parse_chart(R"(dim = 1
coords = x y
g[1][1] = 1/(1 + (x^2 + y^2)/16)^2
g[2][2] = 1/(1 + (x^2 + y^2)/16)^2
J[2][1] = 1
J[1][2] = -1
)");
    const ExprChart chart(s2);
    const CurvatureTensor r = riemann(chart, vec({0.7, -1.1}));
    EXPECT_LT(max_abs_diff(r.values, (0.25 * pi1(r.point)).values), 1e-8);
}

TEST(Riemann, SphereAndFubiniStudy) {
    const ModelDescriptor s6 = model_sphere6();
    for (const Vector& p : s6.source->default_points()) {
        const CurvatureTensor r = riemann(*s6.source, p);
        EXPECT_LT(max_abs_diff(r.values, pi1_oracle(r.point)), 1e-5);
    }
    const ModelDescriptor cp2 = model_fubini_study(2, 4.0);
    const CurvatureTensor r = riemann(*cp2.source, Vector::Zero(4));
    const Tensor4 oracle = build_from_decomposition(Bilinear(r.point, 6.0 * r.point.g()), 1.0).values;
    EXPECT_LT(max_abs_diff(r.values, oracle), 1e-5);
}

TEST(Ricci, ContractionOfPi1) {
    Rng rng = make_rng(21);
    for (int m = 2; m <= 3; ++m) {
        const HermitianPoint p = random_hermitian_point(m, rng);
        EXPECT_LT((ricci(pi1(p)).values - (2.0 * m - 1.0) * p.g()).cwiseAbs().maxCoeff(), 1e-12);
        // pi1 + pi2 is the complex space form of holomorphic curvature 4
        EXPECT_LT((ricci(pi1(p) + pi2(p)).values - 2.0 * (m + 1) * p.g()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Ricci, Fixtures) {
    const ModelDescriptor s6 = model_sphere6();
    const Vector p = s6.source->default_points()[1];
    const CurvatureTensor r = riemann(*s6.source, p);
    EXPECT_LT((ricci(r).values - 5.0 * r.point.g()).cwiseAbs().maxCoeff(), 1e-5);
    const ModelDescriptor cp2 = model_fubini_study(2, 4.0);
    const CurvatureTensor r2 = riemann(*cp2.source, cp2.source->default_points()[2]);
    EXPECT_LT((ricci(r2).values - 6.0 * r2.point.g()).cwiseAbs().maxCoeff(), 1e-5);
}

TEST(NablaJ, Fixtures) {
    const Vector p4 = vec({0.3, -0.2, 0.1, 0.4});
    EXPECT_LT(nabla_J(*model_flat(2).source, p4).max_abs(), 1e-10);
    EXPECT_LT(nabla_J(*model_fubini_study(2, 4.0).source, p4).max_abs(), 1e-6);

    const ModelDescriptor s6 = model_sphere6();
    const Vector p = s6.source->default_points()[2];
    const Tensor3 nj = nabla_J(*s6.source, p);
    EXPECT_GT(nj.max_abs(), 0.1);
    const HermitianPoint pt = s6.source->evaluate(p);
    Rng rng = make_rng(3);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const Vector x = random_unit_vector(pt, rng);
        // (nabla_x J) x
        Vector out = Vector::Zero(6);
        for (int k = 0; k < 6; ++k)
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 6; ++j) out[i] += x[k] * nj(k, i, j) * x[j];
        worst = std::max(worst, pt.norm(out));
    }
    EXPECT_LT(worst, 1e-5);
}

TEST(NablaBilinear, MetricCompatibility) {
    const ModelDescriptor s6 = model_sphere6();
    const Vector p = s6.source->default_points()[1];
    const BilinearField g = [&](const Vector& q) { return s6.source->sample(q).first; };
    EXPECT_LT(nabla_bilinear(*s6.source, p, g).max_abs(), 1e-7);

    const ModelDescriptor cp2 = model_fubini_study(2, 4.0);
    const Vector q = cp2.source->default_points()[1];
    const BilinearField einstein = [&](const Vector& x) { return Matrix(6.0 * cp2.source->sample(x).first); };
    EXPECT_LT(nabla_bilinear(*cp2.source, q, einstein).max_abs(), 1e-7);
}

TEST(NablaBilinear, ConformalFieldOnFlatSpace) {
    const ModelDescriptor flat = model_flat(2);
    const Vector p = vec({0.3, -0.2, 0.1, 0.4});
    const BilinearField f = [](const Vector& x) { return Matrix((1.0 + 0.1 * x[0]) * Matrix::Identity(4, 4)); };
    const Tensor3 ns = nabla_bilinear(*flat.source, p, f);
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                EXPECT_NEAR(k == 0 && i == j ? 0.1 : 0.0, ns(k, i, j), 1e-10);
}

TEST(NablaR, FixturesAndBianchi) {
    const Vector p4 = vec({0.3, -0.2, 0.1, 0.4});
    EXPECT_LT(nabla_R(*model_flat(2).source, p4).max_abs(), 1e-8);

    const ModelDescriptor s6 = model_sphere6();
    const Tensor5 nr = nabla_R(*s6.source, s6.source->default_points()[3]);
    EXPECT_LT(nr.max_abs(), 1e-4);
    EXPECT_LT(bianchi2_residual(nr), 1e-4);

    const ModelDescriptor cp2 = model_fubini_study(2, 4.0);
    EXPECT_LT(bianchi2_residual(nabla_R(*cp2.source, cp2.source->default_points()[1])), 1e-4);
}

TEST(NablaR, ContractionGivesNablaRicci) {
    // compare with nabla_bilinear of the Ricci field on a non-Einstein chart
    const ModelDescriptor prod = model_product_spheres(1.0, 2.0);
    const Vector p = prod.source->default_points()[1];
    const PointGeometry geo = point_geometry(*prod.source, p);
    const BilinearField s = [&](const Vector& q) { return ricci(riemann(*prod.source, q)).values; };
    EXPECT_LT(max_abs_diff(geo.nabla_s, nabla_bilinear(*prod.source, p, s)), 1e-6);
}

TEST(ClassResiduals, Fixtures) {
    const Vector p4 = vec({0.3, -0.2, 0.1, 0.4});
    const ClassResiduals flat = class_residuals(*model_flat(2).source, p4);
    EXPECT_LT(std::max({flat.kahler, flat.nearly_kahler, flat.almost_kahler}), 1e-10);
    const ClassResiduals cp = class_residuals(*model_fubini_study(2, 4.0).source, p4);
    EXPECT_LT(std::max({cp.kahler, cp.nearly_kahler, cp.almost_kahler}), 1e-6);
    const ModelDescriptor s6 = model_sphere6();
    for (const Vector& p : s6.source->default_points()) {
        const ClassResiduals s = class_residuals(*s6.source, p);
        EXPECT_LT(s.nearly_kahler, 1e-5);
        EXPECT_GT(s.kahler, 0.1);
        EXPECT_GT(s.almost_kahler, 0.1);
    }
}

TEST(ClassResiduals, BoundedByKahlerResidual) {
    const ModelDescriptor s6 = model_sphere6();
    for (const Vector& p : s6.source->default_points()) {
        const ClassResiduals s = class_residuals(*s6.source, p);
        EXPECT_LE(s.nearly_kahler, s.kahler);
        EXPECT_LE(s.almost_kahler, s.kahler);
    }
}

TEST(GrayIdentity, Fixtures) {
    const Vector p4 = vec({0.3, -0.2, 0.1, 0.4});
    EXPECT_LT(gray_ak2_residual(*model_flat(2).source, p4), 1e-10);
    EXPECT_LT(gray_ak2_residual(*model_fubini_study(2, 4.0).source, p4), 1e-5);
    const double s6 = gray_ak2_residual(*model_sphere6().source, Vector::Zero(6));
    EXPECT_TRUE(std::isfinite(s6));
}
