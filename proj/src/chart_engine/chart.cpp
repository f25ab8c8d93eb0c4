#include "ahgeom/chart.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

namespace ahgeom {

namespace {

constexpr int kMaxComplexDim = 8;

std::string shortest(double v) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

/// One non-empty line with comments removed. `col0` is the 0-based column of text[0].
struct Line {
    int number;
    int col0;
    std::string_view text;
};

[[noreturn]] void fail(SyntaxIssue::Kind kind, int line, int column, std::string msg) {
    throw ChartError(SyntaxIssue{kind, line, column, std::move(msg)});
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> out;
    int number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++number;
        std::string_view raw = text.substr(start, end - start);
        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        std::size_t b = 0;
        while (b < raw.size() && is_space(raw[b])) ++b;
        std::size_t e = raw.size();
        while (e > b && is_space(raw[e - 1])) --e;
        if (e > b) out.push_back(Line{number, static_cast<int>(b), raw.substr(b, e - b)});
        start = end + 1;
    }
    return out;
}

/// Cursor over a single line with 1-based column reporting.
class LineCursor {
public:
    explicit LineCursor(const Line& line) : line_(line) {}

    int column() const { return line_.col0 + static_cast<int>(pos_) + 1; }
    int column_at(std::size_t p) const { return line_.col0 + static_cast<int>(p) + 1; }
    std::size_t pos() const { return pos_; }
    bool at_end() const { return pos_ >= line_.text.size(); }
    char peek() const { return at_end() ? '\0' : line_.text[pos_]; }
    std::string_view rest() const { return line_.text.substr(pos_); }
    int number() const { return line_.number; }

    void skip_space() {
        while (!at_end() && is_space(line_.text[pos_])) ++pos_;
    }

    std::string_view identifier() {
        skip_space();
        const std::size_t start = pos_;
        if (!is_ident_start(peek())) fail(SyntaxIssue::Kind::Syntax, number(), column(), "expected an identifier");
        while (is_ident_char(peek())) ++pos_;
        return line_.text.substr(start, pos_ - start);
    }

    void expect(char c) {
        skip_space();
        if (peek() != c) {
            const std::string found = at_end() ? std::string("end of line") : fmt::format("'{}'", peek());
            fail(SyntaxIssue::Kind::Syntax, number(), column(), fmt::format("expected '{}', found {}", c, found));
        }
        ++pos_;
    }

    /// Whitespace separated token, or empty at end of line.
    std::string_view token() {
        skip_space();
        const std::size_t start = pos_;
        while (!at_end() && !is_space(peek())) ++pos_;
        return line_.text.substr(start, pos_ - start);
    }

    double number_token(std::string_view what) {
        skip_space();
        const int col = column();
        std::string_view tok = token();
        if (tok.empty()) fail(SyntaxIssue::Kind::Syntax, number(), col, fmt::format("expected {}", what));
        std::string_view body = tok;
        if (!body.empty() && body.front() == '+') body.remove_prefix(1);
        double v = 0.0;
        auto res = std::from_chars(body.data(), body.data() + body.size(), v);
        if (body.empty() || res.ec != std::errc() || res.ptr != body.data() + body.size() || !std::isfinite(v))
            fail(SyntaxIssue::Kind::Syntax, number(), col, fmt::format("malformed number '{}'", tok));
        return v;
    }

    int index() {
        expect('[');
        skip_space();
        const int col = column();
        std::string_view tok;
        const std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        tok = line_.text.substr(start, pos_ - start);
        int v = 0;
        auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (tok.empty() || res.ec != std::errc())
            fail(SyntaxIssue::Kind::Syntax, number(), col, "expected a 1-based index");
        expect(']');
        index_col_ = col;
        return v;
    }
    int last_index_column() const { return index_col_; }

    void expect_end() {
        skip_space();
        if (!at_end())
            fail(SyntaxIssue::Kind::Syntax, number(), column(), fmt::format("unexpected '{}'", rest()));
    }

private:
    const Line& line_;
    std::size_t pos_ = 0;
    int index_col_ = 0;
};

struct TableEntry {
    int line = 0;
    std::optional<Expr> expr;
};

}  // namespace

ChartSpec parse_chart(std::string_view text) {
    const std::vector<Line> lines = split_lines(text);

    ChartSpec spec;
    int dim_line = 0;
    int coords_line = 0;

    // Pass 1: dimension and coordinate names, so expressions can be resolved in any order.
    for (const Line& line : lines) {
        LineCursor cur(line);
        if (!is_ident_start(cur.peek())) continue;
        const std::string_view key = cur.identifier();
        if (key == "dim") {
            if (dim_line != 0)
                fail(SyntaxIssue::Kind::Conflict, line.number, 0, fmt::format("dim already set on line {}", dim_line));
            cur.expect('=');
            cur.skip_space();
            const int col = cur.column();
            const std::string_view tok = cur.token();
            int m = 0;
            auto res = std::from_chars(tok.data(), tok.data() + tok.size(), m);
            if (tok.empty() || res.ec != std::errc() || res.ptr != tok.data() + tok.size())
                fail(SyntaxIssue::Kind::Syntax, line.number, col, fmt::format("expected an integer, found '{}'", tok));
            if (m < 1 || m > kMaxComplexDim)
                fail(SyntaxIssue::Kind::Value, line.number, col,
                     fmt::format("dim must be between 1 and {}, got {}", kMaxComplexDim, m));
            cur.expect_end();
            spec.m = m;
            dim_line = line.number;
        } else if (key == "coords") {
            if (coords_line != 0)
                fail(SyntaxIssue::Kind::Conflict, line.number, 0,
                     fmt::format("coords already declared on line {}", coords_line));
            cur.expect('=');
            for (;;) {
                cur.skip_space();
                if (cur.at_end()) break;
                const int col = cur.column();
                const std::string name(cur.identifier());
                if (!cur.at_end() && !is_space(cur.peek()))
                    fail(SyntaxIssue::Kind::Syntax, line.number, cur.column(),
                         fmt::format("unexpected '{}' in coordinate list", cur.peek()));
                Func f;
                if (lookup_function(name, f))
                    fail(SyntaxIssue::Kind::Conflict, line.number, col,
                         fmt::format("'{}' is a function name and cannot be a coordinate", name));
                if (std::find(spec.coord_names.begin(), spec.coord_names.end(), name) != spec.coord_names.end())
                    fail(SyntaxIssue::Kind::Conflict, line.number, col, fmt::format("coordinate '{}' repeated", name));
                spec.coord_names.push_back(name);
            }
            coords_line = line.number;
        }
    }
    if (dim_line == 0) fail(SyntaxIssue::Kind::Missing, 1, 0, "no 'dim = <m>' line");
    if (coords_line == 0) fail(SyntaxIssue::Kind::Missing, 1, 0, "no 'coords = ...' line");
    const int n = spec.dim();
    if (static_cast<int>(spec.coord_names.size()) != n)
        fail(SyntaxIssue::Kind::DimensionMismatch, coords_line, 0,
             fmt::format("dim = {} needs {} coordinates, got {}", spec.m, n, spec.coord_names.size()));

    std::vector<TableEntry> metric(static_cast<std::size_t>(n * n));
    std::vector<TableEntry> cplx(static_cast<std::size_t>(n * n));
    std::vector<int> domain_line(static_cast<std::size_t>(n), 0);
    spec.domain.assign(static_cast<std::size_t>(n), std::nullopt);
    std::vector<int> point_lines;

    for (const Line& line : lines) {
        LineCursor cur(line);
        if (!is_ident_start(cur.peek()))
            fail(SyntaxIssue::Kind::Syntax, line.number, cur.column(), "expected a statement keyword");
        const std::string_view key = cur.identifier();
        if (key == "dim" || key == "coords") continue;

        if (key == "domain") {
            cur.skip_space();
            const int col = cur.column();
            const std::string name(cur.identifier());
            auto it = std::find(spec.coord_names.begin(), spec.coord_names.end(), name);
            if (it == spec.coord_names.end())
                fail(SyntaxIssue::Kind::UndeclaredIdentifier, line.number, col,
                     fmt::format("undeclared identifier '{}'", name));
            const auto k = static_cast<std::size_t>(it - spec.coord_names.begin());
            if (domain_line[k] != 0)
                fail(SyntaxIssue::Kind::Conflict, line.number, col,
                     fmt::format("domain of '{}' already set on line {}", name, domain_line[k]));
            cur.expect('=');
            cur.skip_space();
            const int vcol = cur.column();
            const double lo = cur.number_token("lower bound");
            const double hi = cur.number_token("upper bound");
            cur.expect_end();
            if (!(lo < hi))
                fail(SyntaxIssue::Kind::Value, line.number, vcol,
                     fmt::format("empty domain [{}, {}] for '{}'", shortest(lo), shortest(hi), name));
            spec.domain[k] = Interval{lo, hi};
            domain_line[k] = line.number;
        } else if (key == "point") {
            cur.expect('=');
            std::vector<double> p;
            cur.skip_space();
            while (!cur.at_end()) {
                p.push_back(cur.number_token("a coordinate value"));
                cur.skip_space();
            }
            if (static_cast<int>(p.size()) != n)
                fail(SyntaxIssue::Kind::DimensionMismatch, line.number, 0,
                     fmt::format("point has {} values, expected {}", p.size(), n));
            spec.default_points.push_back(std::move(p));
            point_lines.push_back(line.number);
        } else if (key == "g" || key == "J") {
            const int i = cur.index();
            const int icol = cur.last_index_column();
            const int j = cur.index();
            const int jcol = cur.last_index_column();
            if (i < 1 || i > n)
                fail(SyntaxIssue::Kind::DimensionMismatch, line.number, icol,
                     fmt::format("index {} outside 1..{}", i, n));
            if (j < 1 || j > n)
                fail(SyntaxIssue::Kind::DimensionMismatch, line.number, jcol,
                     fmt::format("index {} outside 1..{}", j, n));
            cur.expect('=');
            const int expr_col0 = cur.column() - 1;
            Expr e = parse_expression(cur.rest(), spec.coord_names, line.number, expr_col0);

            auto& table = key == "g" ? metric : cplx;
            auto set = [&](int r, int c) {
                auto& slot = table[static_cast<std::size_t>((r - 1) * n + (c - 1))];
                if (slot.expr && !(*slot.expr == e))
                    fail(SyntaxIssue::Kind::Conflict, line.number, icol,
                         fmt::format("{}[{}][{}] conflicts with the definition on line {}", key, r, c, slot.line));
                slot.expr = e;
                slot.line = line.number;
            };
            set(i, j);
            if (key == "g" && i != j) set(j, i);
        } else {
            fail(SyntaxIssue::Kind::Syntax, line.number, line.col0 + 1, fmt::format("unknown statement '{}'", key));
        }
    }

    for (std::size_t p = 0; p < spec.default_points.size(); ++p) {
        for (int k = 0; k < n; ++k) {
            const auto& d = spec.domain[static_cast<std::size_t>(k)];
            const double v = spec.default_points[p][static_cast<std::size_t>(k)];
            if (d && !d->contains(v))
                fail(SyntaxIssue::Kind::Value, point_lines[p], 0,
                     fmt::format("point coordinate {} = {} outside [{}, {}]", spec.coord_names[static_cast<std::size_t>(k)],
                                 shortest(v), shortest(d->lo), shortest(d->hi)));
        }
    }

    spec.metric.reserve(metric.size());
    for (auto& e : metric) spec.metric.push_back(std::move(e.expr));
    spec.complex_structure.reserve(cplx.size());
    for (auto& e : cplx) spec.complex_structure.push_back(std::move(e.expr));
    return spec;
}

std::string serialize_chart(const ChartSpec& spec, std::string_view header) {
    std::string out;
    std::size_t start = 0;
    while (start < header.size()) {
        std::size_t end = header.find('\n', start);
        if (end == std::string_view::npos) end = header.size();
        out += "# ";
        out += header.substr(start, end - start);
        out += '\n';
        start = end + 1;
    }
    const int n = spec.dim();
    out += fmt::format("dim = {}\n", spec.m);
    out += "coords =";
    for (const auto& c : spec.coord_names) out += " " + c;
    out += '\n';
    for (int k = 0; k < n; ++k) {
        const auto& d = spec.domain[static_cast<std::size_t>(k)];
        if (d) out += fmt::format("domain {} = {} {}\n", spec.coord_names[static_cast<std::size_t>(k)], shortest(d->lo), shortest(d->hi));
    }
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const auto& e = spec.metric[static_cast<std::size_t>(i * n + j)];
            if (e) out += fmt::format("g[{}][{}] = {}\n", i + 1, j + 1, e->to_string(spec.coord_names));
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto& e = spec.complex_structure[static_cast<std::size_t>(i * n + j)];
            if (e) out += fmt::format("J[{}][{}] = {}\n", i + 1, j + 1, e->to_string(spec.coord_names));
        }
    for (const auto& p : spec.default_points) {
        out += "point =";
        for (double v : p) out += " " + shortest(v);
        out += '\n';
    }
    return out;
}

std::string format_point(const Vector& p) {
    std::string s = "(";
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (i > 0) s += ", ";
        s += shortest(p[i]);
    }
    return s + ")";
}

std::pair<Matrix, Matrix> MetricSource::sample(const Vector& p) const {
    if (p.size() != dim())
        throw DimensionError(fmt::format("{}: point has {} coordinates, expected {}", name(), p.size(), dim()));
    const auto& dom = domain();
    for (int k = 0; k < dim(); ++k) {
        const auto& d = dom[static_cast<std::size_t>(k)];
        if (!std::isfinite(p[k]) || !d.contains(p[k]))
            throw DomainError(fmt::format("{}: point {} outside the domain ({} = {} not in [{}, {}])", name(),
                                          format_point(p), coordinate_names()[static_cast<std::size_t>(k)],
                                          shortest(p[k]), shortest(d.lo), shortest(d.hi)));
    }
    return raw(p);
}

HermitianPoint MetricSource::evaluate(const Vector& p, double tol) const {
    auto [g, J] = sample(p);
    try {
        return HermitianPoint(std::move(g), std::move(J), tol);
    } catch (const InvariantError& e) {
        throw InvariantError(e.failure(), e.amount(), fmt::format("{} at {}: {}", name(), format_point(p), e.what()));
    }
}

double MetricSource::boundary_distance(const Vector& p) const {
    double best = std::numeric_limits<double>::infinity();
    const auto& dom = domain();
    for (int k = 0; k < dim(); ++k) {
        const auto& d = dom[static_cast<std::size_t>(k)];
        best = std::min({best, p[k] - d.lo, d.hi - p[k]});
    }
    return best;
}

ExprChart::ExprChart(ChartSpec spec, std::string name) : spec_(std::move(spec)), name_(std::move(name)) {
    domain_.reserve(spec_.domain.size());
    for (const auto& d : spec_.domain) domain_.push_back(d.value_or(Interval{}));
}

std::vector<Vector> ExprChart::default_points() const {
    std::vector<Vector> out;
    for (const auto& p : spec_.default_points) out.push_back(Eigen::Map<const Vector>(p.data(), static_cast<Eigen::Index>(p.size())));
    return out;
}

std::pair<Matrix, Matrix> ExprChart::raw(const Vector& p) const {
    const int n = spec_.dim();
    Matrix g = Matrix::Zero(n, n);
    Matrix J = Matrix::Zero(n, n);
    const std::span<const double> vars(p.data(), static_cast<std::size_t>(p.size()));
    std::string where;
    auto fill = [&](const std::vector<std::optional<Expr>>& table, Matrix& out, char label) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const auto& e = table[static_cast<std::size_t>(i * n + j)];
                if (!e) continue;
                double v = 0.0;
                if (!e->evaluate_checked(vars, v, where))
                    throw DomainError(fmt::format("{}: {}[{}][{}] = {} at {}: {}", name_, label, i + 1, j + 1,
                                                  e->to_string(spec_.coord_names), format_point(p), where));
                out(i, j) = v;
            }
    };
    fill(spec_.metric, g, 'g');
    fill(spec_.complex_structure, J, 'J');
    return {std::move(g), std::move(J)};
}

HermitianPoint eval_point(const ChartSpec& chart, const Vector& p) { return ExprChart(chart).evaluate(p); }

}  // namespace ahgeom
