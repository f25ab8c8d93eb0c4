#include "ahgeom/models.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>

namespace ahgeom {

namespace {

std::string num(double v) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

// Deterministic offsets used to place default points away from the origin.
constexpr std::array<std::array<double, 6>, 4> kOffsets{{
    {0.30, -0.20, 0.10, 0.40, -0.50, 0.20},
    {-0.60, 0.10, 0.70, -0.30, 0.20, 0.05},
    {0.90, 0.40, -0.80, 0.30, 0.60, -0.90},
    {-0.25, -0.75, 0.35, 0.55, -0.15, 0.45},
}};

std::vector<std::vector<double>> spread_points(int n, int count, double scale) {
    std::vector<std::vector<double>> out;
    out.emplace_back(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i + 1 < count; ++i) {
        std::vector<double> p(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k)
            p[static_cast<std::size_t>(k)] = std::round(
                1e6 * scale * kOffsets[static_cast<std::size_t>(i) % kOffsets.size()][static_cast<std::size_t>(k) % 6]) / 1e6;
        out.push_back(std::move(p));
    }
    return out;
}

std::string coord_name(int index) {
    return fmt::format("{}{}", index % 2 == 0 ? 'x' : 'y', index / 2 + 1);
}

std::string chart_preamble(int m, double half_width, const std::vector<std::vector<double>>& points) {
    const int n = 2 * m;
    std::string t = fmt::format("dim = {}\ncoords =", m);
    for (int k = 0; k < n; ++k) t += " " + coord_name(k);
    t += '\n';
    for (int k = 0; k < n; ++k) t += fmt::format("domain {} = {} {}\n", coord_name(k), num(-half_width), num(half_width));
    for (int k = 0; k < m; ++k) t += fmt::format("J[{}][{}] = 1\nJ[{}][{}] = -1\n", 2 * k + 2, 2 * k + 1, 2 * k + 1, 2 * k + 2);
    for (const auto& p : points) {
        t += "point =";
        for (double v : p) t += " " + num(v);
        t += '\n';
    }
    return t;
}

ChartSpec flat_chart(int m) {
    const auto pts = spread_points(2 * m, 3, 1.0);
    std::string t = chart_preamble(m, 1.5, pts);
    for (int k = 1; k <= 2 * m; ++k) t += fmt::format("g[{}][{}] = 1\n", k, k);
    return parse_chart(t);
}

/// Hermitian metric [(1 + k r^2) I - k (a a^T + b b^T)] / (1 + k r^2)^2 with
/// a = (x1, y1, ...), b = J a = (-y1, x1, ...). Holomorphic curvature 4k.
ChartSpec kaehler_ball_chart(int m, double k, double half_width, const std::vector<std::vector<double>>& points) {
    const int n = 2 * m;
    std::string r2;
    for (int i = 0; i < n; ++i) r2 += (i ? " + " : "") + coord_name(i) + "^2";
    const double ak = std::abs(k);
    const std::string kk = ak == 1.0 ? "" : num(ak) + "*";
    const std::string denom = fmt::format("(1 {} {}({}))", k > 0 ? "+" : "-", kk, r2);

    // a_i and b_i as (sign, variable index)
    auto a_of = [](int i) { return std::pair{1, i}; };
    auto b_of = [](int i) { return i % 2 == 0 ? std::pair{-1, i + 1} : std::pair{1, i - 1}; };

    std::string t = chart_preamble(m, half_width, points);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            std::map<std::pair<int, int>, int> poly;
            for (auto [si, vi] : {std::pair{a_of(i), a_of(j)}, std::pair{b_of(i), b_of(j)}}) {
                const auto key = std::minmax(si.second, vi.second);
                poly[{key.first, key.second}] += si.first * vi.first;
            }
            std::string p;
            for (const auto& [vars, coef] : poly) {
                if (coef == 0) continue;
                const std::string mono = vars.first == vars.second
                                             ? coord_name(vars.first) + "^2"
                                             : coord_name(vars.first) + "*" + coord_name(vars.second);
                const std::string c = std::abs(coef) == 1 ? "" : fmt::format("{}*", std::abs(coef));
                if (p.empty())
                    p = (coef < 0 ? "-" : "") + c + mono;
                else
                    p += (coef < 0 ? " - " : " + ") + c + mono;
            }
            // numerator = [i == j] * denom - k * p
            std::string numer;
            if (i == j) numer = denom;
            if (!p.empty()) {
                const char sign = k > 0 ? '-' : '+';
                numer = numer.empty() ? fmt::format("{}{}({})", sign == '-' ? "-" : "", kk, p)
                                      : fmt::format("{} {} {}({})", numer, sign, kk, p);
            }
            if (numer.empty()) continue;
            t += fmt::format("g[{}][{}] = ({})/{}^2\n", i + 1, j + 1, numer, denom);
        }
    return parse_chart(t);
}

ChartSpec product_spheres_chart(double r1, double r2) {
    const auto pts = spread_points(4, 3, 1.0);
    std::string t = chart_preamble(2, 1.5, pts);
    const std::array<double, 2> radii{r1, r2};
    for (int f = 0; f < 2; ++f) {
        const std::string x = coord_name(2 * f);
        const std::string y = coord_name(2 * f + 1);
        const std::string conf =
            fmt::format("1/(1 + ({}^2 + {}^2)/{})^2", x, y, num(4.0 * radii[static_cast<std::size_t>(f)] * radii[static_cast<std::size_t>(f)]));
        t += fmt::format("g[{}][{}] = {}\n", 2 * f + 1, 2 * f + 1, conf);
        t += fmt::format("g[{}][{}] = {}\n", 2 * f + 2, 2 * f + 2, conf);
    }
    return parse_chart(t);
}

ClassFlags all_classes() { return ClassFlags{true, true, true, true, true, true}; }

ModelDescriptor chart_model(std::string name, std::string description, ChartSpec chart, ModelExpectation expected) {
    auto src = std::make_shared<ExprChart>(chart, name);
    return ModelDescriptor{std::move(name), std::move(description), std::move(src), std::move(chart),
                           std::move(expected)};
}

}  // namespace

const std::array<std::array<int, 3>, 7>& octonion_triples() {
    static const std::array<std::array<int, 3>, 7> triples{{
        {1, 2, 3}, {1, 4, 5}, {1, 7, 6}, {2, 4, 6}, {2, 5, 7}, {3, 4, 7}, {3, 6, 5},
    }};
    return triples;
}

Eigen::Vector<double, 7> cross7(const Eigen::Vector<double, 7>& x, const Eigen::Vector<double, 7>& y) {
    Eigen::Vector<double, 7> out = Eigen::Vector<double, 7>::Zero();
    for (const auto& t : octonion_triples()) {
        // e_i e_j = e_k and its cyclic shifts
        for (int r = 0; r < 3; ++r) {
            const int i = t[static_cast<std::size_t>(r)] - 1;
            const int j = t[static_cast<std::size_t>((r + 1) % 3)] - 1;
            const int k = t[static_cast<std::size_t>((r + 2) % 3)] - 1;
            out[k] += x[i] * y[j] - x[j] * y[i];
        }
    }
    return out;
}

SphereS6::SphereS6() : domain_(6, Interval{-1.5, 1.5}) {}

std::vector<std::string> SphereS6::coordinate_names() const {
    std::vector<std::string> names;
    for (int k = 1; k <= 6; ++k) names.push_back(fmt::format("u{}", k));
    return names;
}

std::vector<Vector> SphereS6::default_points() const {
    std::vector<Vector> out;
    for (const auto& p : spread_points(6, 5, 1.0)) out.push_back(Eigen::Map<const Vector>(p.data(), 6));
    return out;
}

std::pair<Eigen::Vector<double, 7>, Eigen::Matrix<double, 7, 6>> SphereS6::embed(const Vector& u) const {
    const double r2 = u.squaredNorm();
    const double s = 1.0 + r2;
    Eigen::Vector<double, 7> p;
    Eigen::Matrix<double, 7, 6> jac;
    for (int i = 0; i < 6; ++i) {
        p[i] = 2.0 * u[i] / s;
        for (int j = 0; j < 6; ++j) jac(i, j) = (i == j ? 2.0 / s : 0.0) - 4.0 * u[i] * u[j] / (s * s);
    }
    p[6] = (1.0 - r2) / s;
    for (int j = 0; j < 6; ++j) jac(6, j) = -4.0 * u[j] / (s * s);
    return {p, jac};
}

std::pair<Matrix, Matrix> SphereS6::raw(const Vector& u) const {
    const auto [p, e] = embed(u);
    const Matrix g = e.transpose() * e;
    Eigen::Matrix<double, 7, 6> turned;
    for (int j = 0; j < 6; ++j) turned.col(j) = cross7(p, e.col(j));
    Matrix J = g.ldlt().solve(Matrix(e.transpose() * turned));
    return {g, J};
}

std::optional<std::string> ClassFlags::lattice_violation() const {
    if (kahler && !nearly_kahler) return "K without NK";
    if (kahler && !almost_kahler) return "K without AK";
    if (ah1 && !ah2) return "AH1 without AH2";
    if (ah2 && !ah3) return "AH2 without AH3";
    return std::nullopt;
}

ModelDescriptor model_flat(int m) {
    if (m < 1 || m > 4) throw Error(fmt::format("flat model needs 1 <= m <= 4, got {}", m));
    ModelExpectation ex;
    ex.flags = all_classes();
    if (m >= 2) ex.antiholomorphic = 0.0;
    ex.holomorphic = 0.0;
    ex.einstein = 0.0;
    ex.verdict = VerdictKind::RealSpaceForm;
    ex.verdict_constant = 0.0;
    return chart_model(fmt::format("flat{}", m), fmt::format("Euclidean R^{} with constant standard J", 2 * m),
                       flat_chart(m), ex);
}

ModelDescriptor model_sphere6() {
    ModelExpectation ex;
    ex.flags = ClassFlags{false, true, false, false, true, true};
    ex.antiholomorphic = 1.0;
    ex.holomorphic = 1.0;
    ex.einstein = 5.0;
    ex.verdict = VerdictKind::RealSpaceForm;
    ex.verdict_constant = 1.0;
    return ModelDescriptor{"s6", "unit S^6 with the octonionic nearly Kaehler structure (stereographic chart)",
                           std::make_shared<SphereS6>(), std::nullopt, ex};
}

ModelDescriptor model_fubini_study(int m, double c) {
    if (m < 1 || m > 3) throw Error(fmt::format("Fubini-Study model needs 1 <= m <= 3, got {}", m));
    if (!(c > 0.0)) throw Error(fmt::format("Fubini-Study model needs c > 0, got {}", c));
    const double scale = 2.0 / std::sqrt(c);  // natural length scale of the chart
    ModelExpectation ex;
    ex.flags = all_classes();
    if (m >= 2) ex.antiholomorphic = c / 4.0;
    ex.holomorphic = c;
    ex.einstein = (m + 1) * c / 2.0;
    ex.verdict = VerdictKind::ComplexSpaceForm;
    ex.verdict_constant = c;
    return chart_model(fmt::format("cp{}", m),
                       fmt::format("CP^{} Fubini-Study, holomorphic curvature {}, g(0) = I", m, num(c)),
                       kaehler_ball_chart(m, c / 4.0, 2.0 * scale, spread_points(2 * m, 3, 0.8 * scale)), ex);
}

ModelDescriptor model_complex_hyperbolic(int m, double c) {
    if (m < 1 || m > 2) throw Error(fmt::format("complex hyperbolic model needs 1 <= m <= 2, got {}", m));
    if (!(c < 0.0)) throw Error(fmt::format("complex hyperbolic model needs c < 0, got {}", c));
    // Ball radius 2/sqrt(|c|); the coordinate box stays strictly inside it.
    const double radius = 2.0 / std::sqrt(-c);
    const double half = 0.9 * radius / std::sqrt(2.0 * m);
    ModelExpectation ex;
    ex.flags = all_classes();
    if (m >= 2) ex.antiholomorphic = c / 4.0;
    ex.holomorphic = c;
    ex.einstein = (m + 1) * c / 2.0;
    ex.verdict = VerdictKind::ComplexSpaceForm;
    ex.verdict_constant = c;
    return chart_model(fmt::format("ch{}", m),
                       fmt::format("CH^{} Bergman ball, holomorphic curvature {}, g(0) = I", m, num(c)),
                       kaehler_ball_chart(m, c / 4.0, half, spread_points(2 * m, 3, 0.6 * half)), ex);
}

ModelDescriptor model_product_spheres(double r1, double r2) {
    if (!(r1 > 0.0) || !(r2 > 0.0)) throw Error("sphere radii must be positive");
    ModelExpectation ex;
    ex.flags = all_classes();
    if (r1 == r2) ex.einstein = 1.0 / (r1 * r1);
    ex.verdict = VerdictKind::NotConstantAntiholomorphic;
    return chart_model("s2xs2", fmt::format("S^2({}) x S^2({}) with the product complex structure", num(r1), num(r2)),
                       product_spheres_chart(r1, r2), ex);
}

std::vector<std::string> model_names() { return {"flat2", "s6", "cp1", "cp2", "cp3", "ch1", "ch2", "s2xs2"}; }

ModelDescriptor model_by_name(const std::string& name) {
    if (name == "flat2") return model_flat(2);
    if (name == "s6") return model_sphere6();
    if (name == "cp1") return model_fubini_study(1, 4.0);
    if (name == "cp2") return model_fubini_study(2, 4.0);
    if (name == "cp3") return model_fubini_study(3, 4.0);
    if (name == "ch1") return model_complex_hyperbolic(1, -4.0);
    if (name == "ch2") return model_complex_hyperbolic(2, -4.0);
    if (name == "s2xs2") return model_product_spheres(1.0, 2.0);
    std::string known;
    for (const auto& n : model_names()) known += (known.empty() ? "" : ", ") + n;
    throw Error(fmt::format("unknown model '{}' (known: {})", name, known));
}

}  // namespace ahgeom
