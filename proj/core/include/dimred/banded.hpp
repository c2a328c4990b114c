#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "dimred/types.hpp"

namespace dimred::numkernel {

/// Banded matrix in LAPACK-style band storage, used for the grid pencils
/// where the stencil keeps |i-j| <= bandwidth (s-fast ordering).
template <class T>
class BandedMatrix {
  public:
    BandedMatrix(index_t n, index_t kl, index_t ku)
        : n_(n), kl_(kl), ku_(ku), ld_(2 * kl + ku + 1),
          ab_(static_cast<size_t>(ld_ * n), T{}) {}

    index_t size() const { return n_; }
    index_t lower() const { return kl_; }
    index_t upper() const { return ku_; }

    // storage row index for entry (i, j): kl + ku + i - j, column j
    T& at(index_t i, index_t j) {
        return ab_[static_cast<size_t>((kl_ + ku_ + i - j) + j * ld_)];
    }
    const T& at(index_t i, index_t j) const {
        return ab_[static_cast<size_t>((kl_ + ku_ + i - j) + j * ld_)];
    }

    void add(index_t i, index_t j, T v) {
        if (i < 0 || j < 0 || i >= n_ || j >= n_ || i - j > kl_ || j - i > ku_)
            throw numerical_error("BandedMatrix::add: entry outside band");
        at(i, j) += v;
    }

    std::vector<T> apply(const std::vector<T>& x) const {
        std::vector<T> y(static_cast<size_t>(n_), T{});
        for (index_t j = 0; j < n_; ++j) {
            const index_t i0 = std::max<index_t>(0, j - ku_);
            const index_t i1 = std::min<index_t>(n_ - 1, j + kl_);
            const T xj = x[static_cast<size_t>(j)];
            if (xj == T{}) continue;
            for (index_t i = i0; i <= i1; ++i) y[static_cast<size_t>(i)] += at(i, j) * xj;
        }
        return y;
    }

    double max_abs() const {
        double m = 0.0;
        for (index_t j = 0; j < n_; ++j) {
            const index_t i0 = std::max<index_t>(0, j - ku_);
            const index_t i1 = std::min<index_t>(n_ - 1, j + kl_);
            for (index_t i = i0; i <= i1; ++i) m = std::max(m, std::abs(at(i, j)));
        }
        return m;
    }

  private:
    template <class U> friend class BandedLu;
    index_t n_, kl_, ku_, ld_;
    std::vector<T> ab_;
};

/// LU of a banded matrix with partial pivoting (fill widens the upper band
/// to kl+ku, which the storage above already reserves).
template <class T>
class BandedLu {
  public:
    explicit BandedLu(BandedMatrix<T> a)
        : n_(a.n_), kl_(a.kl_), ku_(a.ku_ + a.kl_), ld_(a.ld_),
          ab_(std::move(a.ab_)), piv_(static_cast<size_t>(n_)) {
        const double tol = 1e-14 * band_max_abs();
        for (index_t k = 0; k < n_; ++k) {
            const index_t rows = std::min(kl_, n_ - 1 - k);
            index_t p = k;
            double best = std::abs(entry(k, k));
            for (index_t i = 1; i <= rows; ++i) {
                const double v = std::abs(entry(k + i, k));
                if (v > best) { best = v; p = k + i; }
            }
            piv_[static_cast<size_t>(k)] = p;
            if (best <= tol) { singular_ = true; return; }
            if (p != k) {
                const index_t cols = std::min(ku_, n_ - 1 - k);
                for (index_t j = 0; j <= cols; ++j) std::swap(entry(k, k + j), entry(p, k + j));
            }
            const T inv = T(1) / entry(k, k);
            for (index_t i = 1; i <= rows; ++i) {
                const T m = entry(k + i, k) * inv;
                entry(k + i, k) = m;
                if (m == T{}) continue;
                const index_t cols = std::min(ku_, n_ - 1 - k);
                for (index_t j = 1; j <= cols; ++j) entry(k + i, k + j) -= m * entry(k, k + j);
            }
        }
    }

    bool singular() const { return singular_; }
    index_t size() const { return n_; }

    std::vector<T> solve(std::vector<T> b) const {
        require_ok();
        for (index_t k = 0; k < n_; ++k) {
            const index_t p = piv_[static_cast<size_t>(k)];
            if (p != k) std::swap(b[static_cast<size_t>(k)], b[static_cast<size_t>(p)]);
            const index_t rows = std::min(kl_, n_ - 1 - k);
            const T bk = b[static_cast<size_t>(k)];
            if (bk == T{}) continue;
            for (index_t i = 1; i <= rows; ++i) b[static_cast<size_t>(k + i)] -= entry(k + i, k) * bk;
        }
        for (index_t k = n_ - 1; k >= 0; --k) {
            T s = b[static_cast<size_t>(k)];
            const index_t cols = std::min(ku_, n_ - 1 - k);
            for (index_t j = 1; j <= cols; ++j) s -= entry(k, k + j) * b[static_cast<size_t>(k + j)];
            b[static_cast<size_t>(k)] = s / entry(k, k);
        }
        return b;
    }

    /// Solve A^T x = b through the same factorization: A = P^T L U, so
    /// A^T x = b  <=>  U^T y = b, L^T z = y, x = P^T z.
    std::vector<T> solve_transpose(std::vector<T> b) const {
        require_ok();
        for (index_t k = 0; k < n_; ++k) {
            T s = b[static_cast<size_t>(k)];
            const index_t jmax = std::min(ku_, k);
            for (index_t j = 1; j <= jmax; ++j) s -= entry(k - j, k) * b[static_cast<size_t>(k - j)];
            b[static_cast<size_t>(k)] = s / entry(k, k);
        }
        for (index_t k = n_ - 1; k >= 0; --k) {
            const index_t rows = std::min(kl_, n_ - 1 - k);
            T s = b[static_cast<size_t>(k)];
            for (index_t i = 1; i <= rows; ++i) s -= entry(k + i, k) * b[static_cast<size_t>(k + i)];
            b[static_cast<size_t>(k)] = s;
            const index_t p = piv_[static_cast<size_t>(k)];
            if (p != k) std::swap(b[static_cast<size_t>(k)], b[static_cast<size_t>(p)]);
        }
        return b;
    }

    std::vector<T> solve_adjoint(const std::vector<T>& b) const {
        if constexpr (std::is_same_v<T, double>) {
            return solve_transpose(b);
        } else {
            std::vector<T> bc(b.size());
            for (size_t k = 0; k < b.size(); ++k) bc[k] = conj_scalar(b[k]);
            std::vector<T> x = solve_transpose(std::move(bc));
            for (T& v : x) v = conj_scalar(v);
            return x;
        }
    }

  private:
    void require_ok() const {
        if (singular_) throw singular_matrix_error("banded lu: matrix is numerically singular");
    }

    // band entry during/after factorization (upper band widened to kl+ku)
    T& entry(index_t i, index_t j) {
        return ab_[static_cast<size_t>((kl_ + (ku_ - kl_) + i - j) + j * ld_)];
    }
    const T& entry(index_t i, index_t j) const {
        return ab_[static_cast<size_t>((kl_ + (ku_ - kl_) + i - j) + j * ld_)];
    }

    double band_max_abs() const {
        double m = 0.0;
        for (const T& v : ab_) m = std::max(m, std::abs(v));
        return m;
    }

    index_t n_, kl_, ku_, ld_;
    std::vector<T> ab_;
    std::vector<index_t> piv_;
    bool singular_ = false;
};

} // namespace dimred::numkernel
