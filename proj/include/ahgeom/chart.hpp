#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ahgeom/errors.hpp"
#include "ahgeom/expr.hpp"
#include "ahgeom/hermitian.hpp"

namespace ahgeom {

/// Tolerance used when checking g and J assembled from a chart.
inline constexpr double kChartInvariantTol = 1e-8;

struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool contains(double v) const { return v >= lo && v <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// A parsed chart file.
///
/// Grammar (line oriented, `#` starts a comment):
///   dim = <m>
///   coords = <id> ... (2m identifiers)
///   domain <id> = <lo> <hi>
///   g[<i>][<j>] = <expr>     1-based; the symmetric entry is filled automatically
///   J[<i>][<j>] = <expr>     J^i_j, acting on column vectors
///   point = <v1> ... <v2m>   repeatable
struct ChartSpec {
    int m = 0;
    std::vector<std::string> coord_names;
    std::vector<std::optional<Expr>> metric;             // 2m x 2m row-major, unset = 0
    std::vector<std::optional<Expr>> complex_structure;  // 2m x 2m row-major, unset = 0
    std::vector<std::optional<Interval>> domain;         // per coordinate, unset = unbounded
    std::vector<std::vector<double>> default_points;

    int dim() const { return 2 * m; }
    friend bool operator==(const ChartSpec&, const ChartSpec&) = default;
};

/// Reads a chart. Never crashes on malformed text; every failure is a ChartError
/// carrying line and column.
ChartSpec parse_chart(std::string_view text);

/// Canonical chart text. `header` lines are emitted as leading comments.
std::string serialize_chart(const ChartSpec& spec, std::string_view header = {});

/// A smooth field of (g, J) over a coordinate box.
///
/// `sample` is the raw evaluation used inside finite-difference stencils;
/// `evaluate` additionally validates the almost Hermitian invariants.
class MetricSource {
public:
    virtual ~MetricSource() = default;

    virtual int m() const = 0;
    int dim() const { return 2 * m(); }
    virtual std::string name() const = 0;
    virtual std::vector<std::string> coordinate_names() const = 0;
    virtual const std::vector<Interval>& domain() const = 0;
    virtual std::vector<Vector> default_points() const = 0;

    /// (g, J) at p with a domain check. Throws DomainError.
    std::pair<Matrix, Matrix> sample(const Vector& p) const;
    /// Validated point data. Throws DomainError or InvariantError.
    HermitianPoint evaluate(const Vector& p, double tol = kChartInvariantTol) const;

    /// Smallest distance from p to the boundary of the domain box.
    double boundary_distance(const Vector& p) const;

protected:
    virtual std::pair<Matrix, Matrix> raw(const Vector& p) const = 0;
};

/// MetricSource backed by the expressions of a ChartSpec.
class ExprChart final : public MetricSource {
public:
    explicit ExprChart(ChartSpec spec, std::string name = "chart");

    int m() const override { return spec_.m; }
    std::string name() const override { return name_; }
    std::vector<std::string> coordinate_names() const override { return spec_.coord_names; }
    const std::vector<Interval>& domain() const override { return domain_; }
    std::vector<Vector> default_points() const override;
    const ChartSpec& spec() const { return spec_; }

protected:
    std::pair<Matrix, Matrix> raw(const Vector& p) const override;

private:
    ChartSpec spec_;
    std::string name_;
    std::vector<Interval> domain_;
};

/// Validated (g, J) of a parsed chart at p.
HermitianPoint eval_point(const ChartSpec& chart, const Vector& p);

std::string format_point(const Vector& p);

}  // namespace ahgeom
