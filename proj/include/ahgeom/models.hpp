#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ahgeom/analysis.hpp"
#include "ahgeom/chart.hpp"

namespace ahgeom {

/// Cross product on R^7 = Im(O) from the Cayley multiplication table
/// e_i e_j = e_k for (i, j, k) in the fixed set of seven oriented triples.
Eigen::Vector<double, 7> cross7(const Eigen::Vector<double, 7>& x, const Eigen::Vector<double, 7>& y);

/// The oriented triples (1-based) of the multiplication table.
const std::array<std::array<int, 3>, 7>& octonion_triples();

/// Unit S^6 in stereographic coordinates u in R^6, p = (2u, 1 - |u|^2) / (1 + |u|^2),
/// with J_p X = p x X pulled back through the embedding.
class SphereS6 final : public MetricSource {
public:
    SphereS6();

    int m() const override { return 3; }
    std::string name() const override { return "s6"; }
    std::vector<std::string> coordinate_names() const override;
    const std::vector<Interval>& domain() const override { return domain_; }
    std::vector<Vector> default_points() const override;

    /// Embedded point and its 7x6 Jacobian.
    std::pair<Eigen::Vector<double, 7>, Eigen::Matrix<double, 7, 6>> embed(const Vector& u) const;

protected:
    std::pair<Matrix, Matrix> raw(const Vector& p) const override;

private:
    std::vector<Interval> domain_;
};

/// Class membership flags in the lattice K = NK ∩ AK, AH1 ⊂ AH2 ⊂ AH3.
struct ClassFlags {
    bool kahler = false;
    bool nearly_kahler = false;
    bool almost_kahler = false;
    bool ah1 = false;
    bool ah2 = false;
    bool ah3 = false;

    /// Empty when consistent; otherwise names the violated inclusion.
    std::optional<std::string> lattice_violation() const;
    friend bool operator==(const ClassFlags&, const ClassFlags&) = default;
};

struct ModelExpectation {
    ClassFlags flags;
    std::optional<double> antiholomorphic;  ///< nu, or empty when not constant / undefined (m = 1)
    std::optional<double> holomorphic;      ///< constant holomorphic curvature, or empty
    std::optional<double> einstein;         ///< Einstein constant, or empty when not Einstein
    VerdictKind verdict = VerdictKind::Inconclusive;
    double verdict_constant = 0.0;
};

struct ModelDescriptor {
    std::string name;
    std::string description;
    std::shared_ptr<const MetricSource> source;
    std::optional<ChartSpec> chart;  ///< set for chart-backed models
    ModelExpectation expected;
};

ModelDescriptor model_flat(int m);
ModelDescriptor model_sphere6();
/// Fubini-Study metric of holomorphic curvature c > 0 in inhomogeneous coordinates, g(0) = I.
ModelDescriptor model_fubini_study(int m, double c);
/// Bergman ball metric of holomorphic curvature c < 0, g(0) = I.
ModelDescriptor model_complex_hyperbolic(int m, double c);
/// S^2(r1) x S^2(r2) with the product complex structure.
ModelDescriptor model_product_spheres(double r1, double r2);

/// Bundled models addressable by name: flat2 s6 cp1 cp2 cp3 ch1 ch2 s2xs2.
std::vector<std::string> model_names();
/// Throws Error for an unknown name.
ModelDescriptor model_by_name(const std::string& name);

}  // namespace ahgeom
