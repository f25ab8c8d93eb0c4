#include "ahgeom/hermitian.hpp"

#include <fmt/format.h>

namespace ahgeom {

std::string to_string(InvariantFailure f) {
    switch (f) {
        case InvariantFailure::NotSymmetricPositiveDefinite: return "metric not symmetric positive definite";
        case InvariantFailure::NotComplexStructure: return "J^2 != -I";
        case InvariantFailure::NotCompatible: return "J^T g J != g";
    }
    return "unknown";
}

InvariantError::InvariantError(InvariantFailure failure, double amount, const std::string& what)
    : Error(what), failure_(failure), amount_(amount) {}

HermitianPoint::InvariantReport HermitianPoint::measure(const Matrix& g, const Matrix& J) {
    InvariantReport rep{};
    rep.symmetry = (g - g.transpose()).cwiseAbs().maxCoeff();
    Matrix sym = 0.5 * (g + g.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
    rep.min_eigenvalue = es.eigenvalues().minCoeff();
    const auto n = g.rows();
    rep.complex_structure = (J * J + Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    rep.compatibility = (J.transpose() * g * J - g).cwiseAbs().maxCoeff();
    return rep;
}

HermitianPoint::HermitianPoint(Matrix g, Matrix J, double tol) : g_(std::move(g)), J_(std::move(J)) {
    if (g_.rows() != g_.cols() || J_.rows() != J_.cols() || g_.rows() != J_.rows())
        throw DimensionError(fmt::format("metric is {}x{} but J is {}x{}", g_.rows(), g_.cols(),
                                         J_.rows(), J_.cols()));
    if (g_.rows() == 0 || g_.rows() % 2 != 0)
        throw DimensionError(fmt::format("tangent dimension {} is not a positive even number", g_.rows()));

    const auto rep = measure(g_, J_);
    const double scale = std::max(1.0, g_.cwiseAbs().maxCoeff());
    if (rep.symmetry > tol)
        throw InvariantError(InvariantFailure::NotSymmetricPositiveDefinite, rep.symmetry,
                             fmt::format("metric not symmetric: max |g - g^T| = {:.3e}", rep.symmetry));
    if (!(rep.min_eigenvalue > 1e-14 * scale))
        throw InvariantError(InvariantFailure::NotSymmetricPositiveDefinite, rep.min_eigenvalue,
                             fmt::format("metric not positive definite: min eigenvalue {:.3e}",
                                         rep.min_eigenvalue));
    if (rep.complex_structure > tol)
        throw InvariantError(InvariantFailure::NotComplexStructure, rep.complex_structure,
                             fmt::format("J^2 != -I: max |J^2 + I| = {:.3e}", rep.complex_structure));
    if (rep.compatibility > tol * scale)
        throw InvariantError(InvariantFailure::NotCompatible, rep.compatibility,
                             fmt::format("J not g-orthogonal: max |J^T g J - g| = {:.3e}", rep.compatibility));

    g_ = (0.5 * (g_ + g_.transpose())).eval();
    Eigen::LLT<Matrix> llt(g_);
    g_inv_ = llt.solve(Matrix::Identity(g_.rows(), g_.cols()));
    omega_ = g_ * J_;
    // g = L L^T  =>  F = L^{-T} satisfies F^T g F = I.
    Matrix L = llt.matrixL();
    frame_ = L.transpose().triangularView<Eigen::Upper>().solve(Matrix::Identity(g_.rows(), g_.cols()));
}

HermitianPoint HermitianPoint::standard(int m) {
    const int n = 2 * m;
    Matrix J = Matrix::Zero(n, n);
    for (int k = 0; k < m; ++k) {
        J(2 * k + 1, 2 * k) = 1.0;
        J(2 * k, 2 * k + 1) = -1.0;
    }
    return HermitianPoint(Matrix::Identity(n, n), J);
}

Bilinear::Bilinear(HermitianPoint p, Matrix q) : point(std::move(p)), values(std::move(q)) {
    if (values.rows() != point.dim() || values.cols() != point.dim())
        throw DimensionError(fmt::format("bilinear form is {}x{} at a point of dimension {}", values.rows(),
                                         values.cols(), point.dim()));
}

double Bilinear::symmetry_residual() const { return (values - values.transpose()).cwiseAbs().maxCoeff(); }

double Bilinear::j_invariance_residual() const {
    const Matrix& J = point.J();
    return (J.transpose() * values * J - values).cwiseAbs().maxCoeff();
}

CurvatureTensor::CurvatureTensor(HermitianPoint p) : point(std::move(p)), values(point.dim()) {}

CurvatureTensor::CurvatureTensor(HermitianPoint p, Tensor4 r) : point(std::move(p)), values(std::move(r)) {
    if (values.dim() != point.dim())
        throw DimensionError(
            fmt::format("curvature tensor of dimension {} at a point of dimension {}", values.dim(), point.dim()));
}

double CurvatureTensor::evaluate(const Vector& x, const Vector& y, const Vector& z, const Vector& u) const {
    const int n = dim();
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        if (x[i] == 0.0) continue;
        for (int j = 0; j < n; ++j) {
            if (y[j] == 0.0) continue;
            const double xy = x[i] * y[j];
            for (int k = 0; k < n; ++k) {
                if (z[k] == 0.0) continue;
                double s = 0.0;
                for (int l = 0; l < n; ++l) s += values(i, j, k, l) * u[l];
                total += xy * z[k] * s;
            }
        }
    }
    return total;
}

namespace {

void check_same_dim(const CurvatureTensor& a, const CurvatureTensor& b) {
    if (a.dim() != b.dim())
        throw DimensionError(fmt::format("curvature tensors of dimension {} and {}", a.dim(), b.dim()));
}

// out_{..a..} = sum_p in_{..p..} M(p, a) on one slot.
Tensor4 contract_slot(const Tensor4& in, const Matrix& M, int slot) {
    const int n = in.dim();
    Tensor4 out(n);
    int idx[4];
    for (idx[0] = 0; idx[0] < n; ++idx[0])
        for (idx[1] = 0; idx[1] < n; ++idx[1])
            for (idx[2] = 0; idx[2] < n; ++idx[2])
                for (idx[3] = 0; idx[3] < n; ++idx[3]) {
                    int src[4] = {idx[0], idx[1], idx[2], idx[3]};
                    const int a = idx[slot];
                    double s = 0.0;
                    for (int p = 0; p < n; ++p) {
                        const double m = M(p, a);
                        if (m == 0.0) continue;
                        src[slot] = p;
                        s += in(src[0], src[1], src[2], src[3]) * m;
                    }
                    out(idx[0], idx[1], idx[2], idx[3]) = s;
                }
    return out;
}

}  // namespace

CurvatureTensor operator+(const CurvatureTensor& a, const CurvatureTensor& b) {
    check_same_dim(a, b);
    return CurvatureTensor(a.point, a.values + b.values);
}

CurvatureTensor operator-(const CurvatureTensor& a, const CurvatureTensor& b) {
    check_same_dim(a, b);
    return CurvatureTensor(a.point, a.values - b.values);
}

CurvatureTensor operator*(double s, const CurvatureTensor& a) { return CurvatureTensor(a.point, s * a.values); }

std::string to_string(PlaneKind k) {
    switch (k) {
        case PlaneKind::Holomorphic: return "holomorphic";
        case PlaneKind::Antiholomorphic: return "antiholomorphic";
        case PlaneKind::Generic: return "generic";
    }
    return "generic";
}

Tensor4 transform_slots(const Tensor4& r, const Matrix* a, const Matrix* b, const Matrix* c, const Matrix* d) {
    const Matrix* maps[4] = {a, b, c, d};
    Tensor4 out = r;
    for (int s = 0; s < 4; ++s)
        if (maps[s] != nullptr) out = contract_slot(out, *maps[s], s);
    return out;
}

Tensor4 change_basis(const Tensor4& r, const Matrix& basis) {
    return transform_slots(r, &basis, &basis, &basis, &basis);
}

}  // namespace ahgeom
