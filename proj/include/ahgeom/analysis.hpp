#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ahgeom/calculus.hpp"
#include "ahgeom/curvature_algebra.hpp"

namespace ahgeom {

using Rng = std::mt19937_64;

/// Generator for stream `index` of a run seeded with `seed`.
Rng make_rng(std::uint64_t seed, std::uint64_t index = 0);

/// Random g-unit vector, uniform on the unit sphere of g.
Vector random_unit_vector(const HermitianPoint& point, Rng& rng);

/// Orthonormal pair spanning span{x, y'} where y' is y with its components
/// along x and Jx removed. Throws PreconditionError if y lies in span{x, Jx}.
Plane antiholomorphic_plane(const HermitianPoint& point, const Vector& x, const Vector& y);

/// n random antiholomorphic planes: x uniform on the unit sphere, y drawn and
/// projected off {x, Jx}. Requires m >= 2.
std::vector<Plane> sample_antiholomorphic_planes(const HermitianPoint& point, int n, Rng& rng);

/// n random holomorphic planes {x, Jx}.
std::vector<Plane> sample_holomorphic_planes(const HermitianPoint& point, int n, Rng& rng);

struct CurvatureStats {
    int samples = 0;
    double mean = 0.0;
    double max_deviation = 0.0;  ///< max |K(alpha) - mean|
    PlaneKind kind = PlaneKind::Generic;
};

CurvatureStats constancy(const CurvatureTensor& r, std::span<const Plane> planes);

/// Basis (e_1, Je_1, ..., e_m, Je_m) with S e_i = lambda_i e_i.
struct SpectralFrame {
    std::vector<Vector> basis;
    std::vector<double> eigenvalues;  ///< lambda_1..lambda_m, ascending

    const Vector& e(int i) const { return basis[static_cast<std::size_t>(2 * i)]; }
    const Vector& je(int i) const { return basis[static_cast<std::size_t>(2 * i + 1)]; }
};

struct EigenframeOptions {
    /// Eigenvalues closer than this (relative to max(1, |lambda|)) share an eigenspace.
    double merge_tol = 1e-8;
    /// Allowed distance of Je from the eigenspace of e.
    double closure_tol = 1e-6;
};

/// Solves S v = lambda g v, then pairs each eigenspace into {e, Je} blocks.
/// Throws PreconditionError if S is not J-invariant (an eigenspace is odd or not J-closed).
SpectralFrame adapted_eigenframe(const Bilinear& s, const EigenframeOptions& opts = {});

/// S - sum_i lambda_i (e_i (x) e_i + Je_i (x) Je_i), lowered with g.
Matrix eigenframe_reconstruction(const SpectralFrame& frame, const Bilinear& s);

struct EinsteinFit {
    double lambda = 0.0;    ///< trace_g(S) / 2m
    double residual = 0.0;  ///< max |S - lambda g|
};

EinsteinFit einstein_residual(const Bilinear& s);

/// max |R - (psi(S)/6 + nu pi1 - (2m-1)/3 nu pi2)|.
double decomposition_residual(const CurvatureTensor& r, const Bilinear& s, double nu, double tol = kDefaultInputTol);

/// max over coordinate 5-tuples of |(nabla_x R)(y,z,u,v) + (nabla_y R)(z,x,u,v) + (nabla_z R)(x,y,u,v)|.
double bianchi2_residual(const Tensor5& nabla_r);

/// max over i != j of
/// |(nabla_{e_j} S)(e_i, e_j) + (lambda_i + lambda_j - 2(2m-1)nu) g(Je_i, (nabla_{e_j} J) e_j)|.
double frame_relation_residual(const SpectralFrame& frame, const HermitianPoint& point, const Tensor3& nabla_s,
                               const Tensor3& nabla_j, double nu);

enum class VerdictKind { RealSpaceForm, ComplexSpaceForm, NotConstantAntiholomorphic, NotAH3, Inconclusive };

std::string to_string(VerdictKind k);

struct Verdict {
    VerdictKind kind = VerdictKind::Inconclusive;
    /// Sectional curvature for RealSpaceForm, holomorphic curvature for ComplexSpaceForm.
    double constant = 0.0;
    PiSpanFit fit;
    double ah3_residual = 0.0;
    double antiholomorphic_deviation = 0.0;
    double kahler_residual = 0.0;
    double einstein_residual = 0.0;

    bool has_constant() const {
        return kind == VerdictKind::RealSpaceForm || kind == VerdictKind::ComplexSpaceForm;
    }
};

std::string describe(const Verdict& v);

/// Pointwise classification: AH3 test, antiholomorphic constancy, then the
/// projection of R onto span{pi1, pi2}. `antiholo` is empty when m = 1.
Verdict classify(const CurvatureTensor& r, const Bilinear& s, const ClassResiduals& classes,
                 const CurvatureStats& holo, const std::optional<CurvatureStats>& antiholo, double tol);

struct SchurReport {
    std::vector<double> nu_per_point;
    double spread = 0.0;  ///< max pairwise |nu_p - nu_q|
    bool applies = false;  ///< m > 2
};

SchurReport schur_check(const MetricSource& src, std::span<const Vector> points, const FdOptions& opts, int samples,
                        std::uint64_t seed);

/// Random (g, J) pair at a point: J = A J0 A^-1, g = A^-T A^-1, A a well-conditioned perturbation of I.
HermitianPoint random_hermitian_point(int m, Rng& rng);

/// Random symmetric J-invariant form A + J^T A J.
Bilinear random_j_invariant_form(const HermitianPoint& point, Rng& rng);

}  // namespace ahgeom
