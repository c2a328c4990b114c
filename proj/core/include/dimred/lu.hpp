#pragma once

#include <cmath>
#include <numeric>
#include <vector>

#include "dimred/matrix.hpp"

namespace dimred::numkernel {

/// Dense LU with partial pivoting. A pivot of magnitude below
/// 1e-14 * max|A| marks the matrix as numerically singular.
template <class T>
class LuFactor {
  public:
    explicit LuFactor(DenseMatrix<T> a) : lu_(std::move(a)), piv_(static_cast<size_t>(lu_.rows())) {
        if (lu_.rows() != lu_.cols()) throw numerical_error("lu: matrix must be square");
        const index_t n = lu_.rows();
        const double tol = 1e-14 * lu_.max_abs();
        std::iota(piv_.begin(), piv_.end(), index_t{0});
        for (index_t k = 0; k < n; ++k) {
            index_t p = k;
            double best = std::abs(lu_(k, k));
            for (index_t i = k + 1; i < n; ++i) {
                const double v = std::abs(lu_(i, k));
                if (v > best) { best = v; p = i; }
            }
            if (best <= tol) { singular_ = true; return; }
            if (p != k) {
                for (index_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
                std::swap(piv_[static_cast<size_t>(k)], piv_[static_cast<size_t>(p)]);
            }
            const T inv = T(1) / lu_(k, k);
            for (index_t i = k + 1; i < n; ++i) {
                const T m = lu_(i, k) * inv;
                lu_(i, k) = m;
                if (m == T{}) continue;
                for (index_t j = k + 1; j < n; ++j) lu_(i, j) -= m * lu_(k, j);
            }
        }
    }

    bool singular() const { return singular_; }
    index_t size() const { return lu_.rows(); }

    std::vector<T> solve(const std::vector<T>& b) const {
        require_ok();
        const index_t n = lu_.rows();
        std::vector<T> x(static_cast<size_t>(n));
        for (index_t i = 0; i < n; ++i) x[static_cast<size_t>(i)] = b[static_cast<size_t>(piv_[static_cast<size_t>(i)])];
        for (index_t i = 1; i < n; ++i) {
            T s = x[static_cast<size_t>(i)];
            for (index_t j = 0; j < i; ++j) s -= lu_(i, j) * x[static_cast<size_t>(j)];
            x[static_cast<size_t>(i)] = s;
        }
        for (index_t i = n - 1; i >= 0; --i) {
            T s = x[static_cast<size_t>(i)];
            for (index_t j = i + 1; j < n; ++j) s -= lu_(i, j) * x[static_cast<size_t>(j)];
            x[static_cast<size_t>(i)] = s / lu_(i, i);
        }
        return x;
    }

    /// Solve A^T x = b (same factorization, swapped triangles).
    std::vector<T> solve_transpose(const std::vector<T>& b) const {
        require_ok();
        const index_t n = lu_.rows();
        std::vector<T> y = b;
        // U^T y = b (forward)
        for (index_t i = 0; i < n; ++i) {
            T s = y[static_cast<size_t>(i)];
            for (index_t j = 0; j < i; ++j) s -= lu_(j, i) * y[static_cast<size_t>(j)];
            y[static_cast<size_t>(i)] = s / lu_(i, i);
        }
        // L^T z = y (backward)
        for (index_t i = n - 2; i >= 0; --i) {
            T s = y[static_cast<size_t>(i)];
            for (index_t j = i + 1; j < n; ++j) s -= lu_(j, i) * y[static_cast<size_t>(j)];
            y[static_cast<size_t>(i)] = s;
        }
        // undo row pivoting: x[piv] = z
        std::vector<T> x(static_cast<size_t>(n));
        for (index_t i = 0; i < n; ++i) x[static_cast<size_t>(piv_[static_cast<size_t>(i)])] = y[static_cast<size_t>(i)];
        return x;
    }

    /// Solve A* x = b for complex T; for real T this is solve_transpose.
    std::vector<T> solve_adjoint(const std::vector<T>& b) const {
        if constexpr (std::is_same_v<T, double>) {
            return solve_transpose(b);
        } else {
            std::vector<T> bc(b.size());
            for (size_t k = 0; k < b.size(); ++k) bc[k] = conj_scalar(b[k]);
            std::vector<T> x = solve_transpose(bc);
            for (T& v : x) v = conj_scalar(v);
            return x;
        }
    }

  private:
    void require_ok() const {
        if (singular_) throw singular_matrix_error("lu: matrix is numerically singular");
    }

    DenseMatrix<T> lu_;
    std::vector<index_t> piv_;
    bool singular_ = false;
};

/// One-shot solve per the numkernel contract.
template <class T>
std::vector<T> lu_solve(const DenseMatrix<T>& a, const std::vector<T>& b) {
    LuFactor<T> f(a);
    if (f.singular()) throw singular_matrix_error("lu_solve: matrix is numerically singular");
    return f.solve(b);
}

/// Dense inverse by column solves (oracle-scale matrices only).
template <class T>
DenseMatrix<T> lu_inverse(const DenseMatrix<T>& a) {
    LuFactor<T> f(a);
    if (f.singular()) throw singular_matrix_error("lu_inverse: matrix is numerically singular");
    const index_t n = a.rows();
    DenseMatrix<T> inv(n, n);
    std::vector<T> e(static_cast<size_t>(n), T{});
    for (index_t j = 0; j < n; ++j) {
        e[static_cast<size_t>(j)] = T(1);
        std::vector<T> x = f.solve(e);
        for (index_t i = 0; i < n; ++i) inv(i, j) = x[static_cast<size_t>(i)];
        e[static_cast<size_t>(j)] = T{};
    }
    return inv;
}

} // namespace dimred::numkernel
