#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qent/errors.hpp"
#include "qent/tolerances.hpp"

namespace qent {

using cplx = std::complex<double>;

/// Dense complex square matrix, row-major. State spaces here are small
/// (dim up to a few dozen), so everything is plain O(n^3) dense algebra.
class Matrix {
public:
    Matrix() = default;

    explicit Matrix(int dim) : dim_(checked_dim(dim)), a_(std::size_t(dim) * dim) {}

    Matrix(int dim, std::vector<cplx> entries) : dim_(checked_dim(dim)), a_(std::move(entries)) {
        if (a_.size() != std::size_t(dim_) * dim_)
            throw InvalidArgumentError("matrix with dim " + std::to_string(dim_) + " needs " +
                                       std::to_string(std::size_t(dim_) * dim_) + " entries, got " +
                                       std::to_string(a_.size()));
    }

    static Matrix identity(int dim) {
        Matrix m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    int dim() const noexcept { return dim_; }

    cplx& operator()(int i, int j) { return a_[std::size_t(i) * dim_ + j]; }
    const cplx& operator()(int i, int j) const { return a_[std::size_t(i) * dim_ + j]; }

    std::span<const cplx> entries() const noexcept { return a_; }

    Matrix adjoint() const {
        Matrix r(dim_);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    cplx trace() const {
        cplx t = 0.0;
        for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

    /// Largest deviation from A = A^dagger, entrywise.
    double hermiticity_residual() const {
        double r = 0.0;
        for (int i = 0; i < dim_; ++i)
            for (int j = i; j < dim_; ++j)
                r = std::max(r, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return r;
    }

    double max_abs() const {
        double r = 0.0;
        for (const cplx& z : a_) r = std::max(r, std::abs(z));
        return r;
    }

private:
    static int checked_dim(int dim) {
        if (dim < 1) throw InvalidArgumentError("matrix dimension must be >= 1, got " + std::to_string(dim));
        return dim;
    }

    int dim_ = 0;
    std::vector<cplx> a_;
};

inline Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatchError("matrix product needs equal dims, got " + std::to_string(a.dim()) +
                                     " and " + std::to_string(b.dim()));
    const int n = a.dim();
    Matrix c(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const cplx aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatchError("matrix difference needs equal dims");
    double r = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) r = std::max(r, std::abs(a(i, j) - b(i, j)));
    return r;
}

/// Real symmetric/square companion for moment and covariance tables.
class RealMatrix {
public:
    RealMatrix() = default;
    explicit RealMatrix(int dim) : dim_(dim), a_(std::size_t(dim) * dim) {
        if (dim < 1) throw InvalidArgumentError("matrix dimension must be >= 1");
    }

    int dim() const noexcept { return dim_; }
    double& operator()(int i, int j) { return a_[std::size_t(i) * dim_ + j]; }
    const double& operator()(int i, int j) const { return a_[std::size_t(i) * dim_ + j]; }
    std::span<const double> entries() const noexcept { return a_; }

private:
    int dim_ = 0;
    std::vector<double> a_;
};

/// Unit vector in C^n; a representative wave function of a ray.
class PureState {
public:
    explicit PureState(std::vector<cplx> amplitudes) : amp_(std::move(amplitudes)) {
        if (amp_.empty()) throw InvalidArgumentError("pure state needs at least one amplitude");
        const double n = norm();
        if (std::abs(n - 1.0) > default_tol.arithmetic)
            throw InvalidArgumentError("pure state norm deviates from 1 by " +
                                       std::to_string(std::abs(n - 1.0)));
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    static PureState normalized(std::vector<cplx> amplitudes) {
        double s = 0.0;
        for (const cplx& z : amplitudes) s += std::norm(z);
        if (s <= 0.0) throw InvalidArgumentError("cannot normalize a zero vector");
        const double inv = 1.0 / std::sqrt(s);
        for (cplx& z : amplitudes) z *= inv;
        return PureState(std::move(amplitudes));
    }

    int dim() const noexcept { return int(amp_.size()); }
    std::span<const cplx> amplitudes() const noexcept { return amp_; }
    const cplx& operator[](int i) const { return amp_[std::size_t(i)]; }

private:
    double norm() const {
        double s = 0.0;
        for (const cplx& z : amp_) s += std::norm(z);
        return std::sqrt(s);
    }

    std::vector<cplx> amp_;
};

}  // namespace qent
