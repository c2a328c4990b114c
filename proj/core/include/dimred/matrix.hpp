#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "dimred/types.hpp"

namespace dimred::numkernel {

/// Dense row-major matrix over double or cplx. All entries must stay finite;
/// that is asserted where matrices enter solvers, not on every write.
template <class T>
class DenseMatrix {
  public:
    DenseMatrix() = default;
    DenseMatrix(index_t rows, index_t cols, T value = T{})
        : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows * cols), value) {
        if (rows < 1 || cols < 1) throw numerical_error("DenseMatrix: rows, cols must be >= 1");
    }

    static DenseMatrix identity(index_t n) {
        DenseMatrix m(n, n);
        for (index_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    index_t rows() const { return rows_; }
    index_t cols() const { return cols_; }

    T& operator()(index_t i, index_t j) { return a_[static_cast<size_t>(i * cols_ + j)]; }
    const T& operator()(index_t i, index_t j) const { return a_[static_cast<size_t>(i * cols_ + j)]; }

    const std::vector<T>& data() const { return a_; }
    std::vector<T>& data() { return a_; }

    DenseMatrix transpose() const {
        DenseMatrix r(cols_, rows_);
        for (index_t i = 0; i < rows_; ++i)
            for (index_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    DenseMatrix adjoint() const {
        DenseMatrix r(cols_, rows_);
        for (index_t i = 0; i < rows_; ++i)
            for (index_t j = 0; j < cols_; ++j) r(j, i) = conj_scalar((*this)(i, j));
        return r;
    }

    std::vector<T> apply(const std::vector<T>& x) const {
        std::vector<T> y(static_cast<size_t>(rows_), T{});
        for (index_t i = 0; i < rows_; ++i) {
            T s{};
            for (index_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[static_cast<size_t>(j)];
            y[static_cast<size_t>(i)] = s;
        }
        return y;
    }

    double max_abs() const {
        double m = 0.0;
        for (const T& v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    double frobenius() const {
        double s = 0.0;
        for (const T& v : a_) s += abs2(v);
        return std::sqrt(s);
    }

    DenseMatrix& operator+=(const DenseMatrix& b) {
        for (size_t k = 0; k < a_.size(); ++k) a_[k] += b.a_[k];
        return *this;
    }
    DenseMatrix& operator-=(const DenseMatrix& b) {
        for (size_t k = 0; k < a_.size(); ++k) a_[k] -= b.a_[k];
        return *this;
    }
    DenseMatrix& operator*=(T s) {
        for (T& v : a_) v *= s;
        return *this;
    }

    friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
    friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }

    friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
        DenseMatrix r(a.rows_, b.cols_);
        for (index_t i = 0; i < a.rows_; ++i)
            for (index_t k = 0; k < a.cols_; ++k) {
                const T aik = a(i, k);
                if (aik == T{}) continue;
                for (index_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }

  private:
    index_t rows_ = 0, cols_ = 0;
    std::vector<T> a_;
};

using RealMatrix = DenseMatrix<double>;
using ComplexMatrix = DenseMatrix<cplx>;

inline ComplexMatrix complexify(const RealMatrix& a) {
    ComplexMatrix r(a.rows(), a.cols());
    for (index_t i = 0; i < a.rows(); ++i)
        for (index_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
    return r;
}

// ---- small vector helpers shared by the iterative kernels ----

template <class T>
double norm2(const std::vector<T>& x) {
    double s = 0.0;
    for (const T& v : x) s += abs2(v);
    return std::sqrt(s);
}

template <class T>
T dot(const std::vector<T>& x, const std::vector<T>& y) {
    // conjugate-linear in the first argument, matching the inner product
    T s{};
    for (size_t k = 0; k < x.size(); ++k) s += conj_scalar(x[k]) * y[k];
    return s;
}

template <class T>
void axpy(T alpha, const std::vector<T>& x, std::vector<T>& y) {
    for (size_t k = 0; k < x.size(); ++k) y[k] += alpha * x[k];
}

template <class T>
void scale(std::vector<T>& x, T s) {
    for (T& v : x) v *= s;
}

} // namespace dimred::numkernel
