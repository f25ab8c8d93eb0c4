#pragma once

#include <Eigen/Dense>

#include <string>

#include "ahgeom/errors.hpp"
#include "ahgeom/tensor.hpp"

namespace ahgeom {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kDefaultInputTol = 1e-9;

/// Which almost Hermitian invariant a (g, J) pair violated.
enum class InvariantFailure {
    NotSymmetricPositiveDefinite,
    NotComplexStructure,  // J*J != -I
    NotCompatible,        // J^T g J != g
};

std::string to_string(InvariantFailure f);

class InvariantError : public Error {
public:
    InvariantError(InvariantFailure failure, double amount, const std::string& what);
    InvariantFailure failure() const { return failure_; }
    /// Size of the violation (max-abs residual, or the offending eigenvalue for SPD).
    double amount() const { return amount_; }

private:
    InvariantFailure failure_;
    double amount_;
};

/// Tangent space data at one point: g and J in a coordinate basis of R^{2m}.
/// J acts on column vectors, J(i, j) = J^i_j.
class HermitianPoint {
public:
    /// Validates g symmetric positive definite, J^2 = -I and J^T g J = g to `tol`.
    HermitianPoint(Matrix g, Matrix J, double tol = kDefaultInputTol);

    /// Euclidean metric with the standard structure J e_{2k-1} = e_{2k}.
    static HermitianPoint standard(int m);

    int m() const { return static_cast<int>(g_.rows()) / 2; }
    int dim() const { return static_cast<int>(g_.rows()); }
    const Matrix& g() const { return g_; }
    const Matrix& J() const { return J_; }
    const Matrix& g_inverse() const { return g_inv_; }
    /// Omega(a, b) = g(a, J b), the fundamental 2-form.
    const Matrix& omega() const { return omega_; }
    /// Columns form a g-orthonormal basis (inverse transpose of the Cholesky factor).
    const Matrix& orthonormal_frame() const { return frame_; }

    double inner(const Vector& x, const Vector& y) const { return x.dot(g_ * y); }
    double norm(const Vector& x) const { return std::sqrt(inner(x, x)); }

    /// Checks the three invariants and returns the worst residual of each kind.
    struct InvariantReport {
        double min_eigenvalue;
        double symmetry;
        double complex_structure;
        double compatibility;
    };
    static InvariantReport measure(const Matrix& g, const Matrix& J);

private:
    Matrix g_;
    Matrix J_;
    Matrix g_inv_;
    Matrix omega_;
    Matrix frame_;
};

/// A (0,2) tensor Q_ij at a point.
struct Bilinear {
    HermitianPoint point;
    Matrix values;

    Bilinear(HermitianPoint p, Matrix q);

    double operator()(const Vector& x, const Vector& y) const { return x.dot(values * y); }
    double symmetry_residual() const;
    /// max |Q(JX, JY) - Q(X, Y)| over coordinate basis pairs.
    double j_invariance_residual() const;
};

/// A (0,4) tensor R_ijkl at a point.
struct CurvatureTensor {
    HermitianPoint point;
    Tensor4 values;

    explicit CurvatureTensor(HermitianPoint p);
    CurvatureTensor(HermitianPoint p, Tensor4 r);

    int dim() const { return point.dim(); }
    double operator()(int i, int j, int k, int l) const { return values(i, j, k, l); }
    double& operator()(int i, int j, int k, int l) { return values(i, j, k, l); }

    /// R(x, y, z, u) for arbitrary tangent vectors.
    double evaluate(const Vector& x, const Vector& y, const Vector& z, const Vector& u) const;
};

CurvatureTensor operator+(const CurvatureTensor& a, const CurvatureTensor& b);
CurvatureTensor operator-(const CurvatureTensor& a, const CurvatureTensor& b);
CurvatureTensor operator*(double s, const CurvatureTensor& a);

enum class PlaneKind { Holomorphic, Antiholomorphic, Generic };

std::string to_string(PlaneKind k);

/// A 2-plane in the tangent space given by a spanning pair.
struct Plane {
    Vector x;
    Vector y;
    PlaneKind kind = PlaneKind::Generic;
};

/// Re-expresses every slot of R in a new basis: R'_{abcd} = R_{ijkl} P^i_a P^j_b P^k_c P^l_d.
Tensor4 change_basis(const Tensor4& r, const Matrix& basis);

/// Contracts each slot s of R with `maps[s]` (identity when null): R'_{abcd} = R_{pqrs} A^p_a ...
Tensor4 transform_slots(const Tensor4& r, const Matrix* a, const Matrix* b, const Matrix* c,
                        const Matrix* d);

}  // namespace ahgeom
