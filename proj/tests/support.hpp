#pragma once

// Shared fixtures and brute-force oracles for the unit tests.

#include <functional>
#include <random>

#include "ahgeom/analysis.hpp"
#include "ahgeom/curvature_algebra.hpp"

namespace ahgeom::testing {

/// Builds the (0,4) tensor f(a, b, c, d) over coordinate basis vectors.
inline Tensor4 tabulate(int n, const std::function<double(const Vector&, const Vector&, const Vector&, const Vector&)>& f) {
    Tensor4 t(n);
    const Matrix id = Matrix::Identity(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) t(a, b, c, d) = f(id.col(a), id.col(b), id.col(c), id.col(d));
    return t;
}

/// pi1 straight from its definition.
inline Tensor4 pi1_oracle(const HermitianPoint& p) {
    return tabulate(p.dim(), [&](const Vector& x, const Vector& y, const Vector& z, const Vector& u) {
        return p.inner(x, u) * p.inner(y, z) - p.inner(x, z) * p.inner(y, u);
    });
}

/// pi2 written out in g and J, without going through psi.
inline Tensor4 pi2_oracle(const HermitianPoint& p) {
    const Matrix& J = p.J();
    return tabulate(p.dim(), [&](const Vector& x, const Vector& y, const Vector& z, const Vector& u) {
        return p.inner(x, J * u) * p.inner(y, J * z) - p.inner(x, J * z) * p.inner(y, J * u) -
               2.0 * p.inner(x, J * y) * p.inner(z, J * u);
    });
}

/// The six-term psi(Q) evaluated vector by vector.
inline Tensor4 psi_oracle(const HermitianPoint& p, const Matrix& q) {
    const Matrix& J = p.J();
    auto Q = [&](const Vector& a, const Vector& b) { return a.dot(q * b); };
    return tabulate(p.dim(), [&](const Vector& x, const Vector& y, const Vector& z, const Vector& u) {
        return p.inner(x, J * u) * Q(y, J * z) - p.inner(x, J * z) * Q(y, J * u) -
               2.0 * p.inner(x, J * y) * Q(z, J * u) + p.inner(y, J * z) * Q(x, J * u) -
               p.inner(y, J * u) * Q(x, J * z) - 2.0 * p.inner(z, J * u) * Q(x, J * y);
    });
}

/// Orthonormal basis of g at p (Gram-Schmidt on the coordinate basis), independent of the library frame.
inline Matrix gram_schmidt(const HermitianPoint& p) {
    const int n = p.dim();
    Matrix f = Matrix::Identity(n, n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < a; ++b) f.col(a) -= p.inner(f.col(a), f.col(b)) * f.col(b);
        f.col(a) /= p.norm(f.col(a));
    }
    return f;
}

inline Vector gaussian_vector(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> d(0.0, 1.0);
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = d(rng);
    return v;
}

inline Matrix block_diagonal_standard(int m, std::initializer_list<double> diag) {
    Matrix s = Matrix::Zero(2 * m, 2 * m);
    int i = 0;
    for (double v : diag) {
        s(i, i) = v;
        ++i;
    }
    return s;
}

}  // namespace ahgeom::testing
