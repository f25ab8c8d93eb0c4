#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <vector>

namespace ahgeom {

/// Dense cube of doubles with `Rank` indices, each running over [0, dim).
/// Storage is row-major (last index fastest). No symmetry compression.
template <std::size_t Rank>
class DenseTensor {
public:
    DenseTensor() = default;
    explicit DenseTensor(int dim, double fill = 0.0)
        : dim_(dim), data_(volume(dim), fill) {}

    int dim() const { return dim_; }
    std::size_t size() const { return data_.size(); }

    template <std::integral... I>
        requires(sizeof...(I) == Rank)
    double& operator()(I... idx) {
        return data_[offset(idx...)];
    }

    template <std::integral... I>
        requires(sizeof...(I) == Rank)
    double operator()(I... idx) const {
        return data_[offset(idx...)];
    }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    double frobenius() const {
        double s = 0.0;
        for (double v : data_) s += v * v;
        return std::sqrt(s);
    }

    DenseTensor& operator+=(const DenseTensor& o) {
        assert(dim_ == o.dim_);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    DenseTensor& operator-=(const DenseTensor& o) {
        assert(dim_ == o.dim_);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    DenseTensor& operator*=(double s) {
        for (double& v : data_) v *= s;
        return *this;
    }

    friend DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
    friend DenseTensor operator-(DenseTensor a, const DenseTensor& b) { return a -= b; }
    friend DenseTensor operator*(double s, DenseTensor a) { return a *= s; }
    friend DenseTensor operator*(DenseTensor a, double s) { return a *= s; }

    friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

private:
    static std::size_t volume(int dim) {
        std::size_t v = 1;
        for (std::size_t r = 0; r < Rank; ++r) v *= static_cast<std::size_t>(dim);
        return v;
    }

    template <std::integral... I>
    std::size_t offset(I... idx) const {
        std::size_t off = 0;
        ((assert(idx >= 0 && static_cast<int>(idx) < dim_),
          off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(idx)),
         ...);
        return off;
    }

    int dim_ = 0;
    std::vector<double> data_;
};

using Tensor3 = DenseTensor<3>;
using Tensor4 = DenseTensor<4>;
using Tensor5 = DenseTensor<5>;

/// Max-norm of the difference of two equally shaped tensors.
template <std::size_t Rank>
double max_abs_diff(const DenseTensor<Rank>& a, const DenseTensor<Rank>& b) {
    assert(a.dim() == b.dim());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

}  // namespace ahgeom
