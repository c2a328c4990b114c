#include "dimred/jacobi.hpp"

#include <algorithm>
#include <cmath>

namespace dimred::numkernel {

namespace {

double offdiag_frobenius(const RealMatrix& a) {
    double s = 0.0;
    for (index_t i = 0; i < a.rows(); ++i)
        for (index_t j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

std::vector<double> jacobi_impl(RealMatrix a, RealMatrix* v) {
    const index_t n = a.rows();
    if (v) *v = RealMatrix::identity(n);
    const double target = 1e-12 * std::max(a.frobenius(), 1e-300);

    for (int sweep = 0; sweep < 100; ++sweep) {
        if (offdiag_frobenius(a) <= target) break;
        for (index_t p = 0; p < n - 1; ++p) {
            for (index_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (index_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (index_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                if (v) {
                    for (index_t k = 0; k < n; ++k) {
                        const double vkp = (*v)(k, p), vkq = (*v)(k, q);
                        (*v)(k, p) = c * vkp - s * vkq;
                        (*v)(k, q) = s * vkp + c * vkq;
                    }
                }
            }
        }
    }

    std::vector<double> eig(static_cast<size_t>(n));
    for (index_t i = 0; i < n; ++i) eig[static_cast<size_t>(i)] = a(i, i);

    if (v) {
        std::vector<index_t> order(static_cast<size_t>(n));
        for (index_t i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
        std::sort(order.begin(), order.end(),
                  [&](index_t i, index_t j) { return eig[static_cast<size_t>(i)] < eig[static_cast<size_t>(j)]; });
        RealMatrix vs(n, n);
        std::vector<double> es(static_cast<size_t>(n));
        for (index_t j = 0; j < n; ++j) {
            es[static_cast<size_t>(j)] = eig[static_cast<size_t>(order[static_cast<size_t>(j)])];
            for (index_t i = 0; i < n; ++i) vs(i, j) = (*v)(i, order[static_cast<size_t>(j)]);
        }
        *v = vs;
        return es;
    }
    std::sort(eig.begin(), eig.end());
    return eig;
}

} // namespace

std::vector<double> jacobi_dense_sym(const RealMatrix& a) {
    if (a.rows() != a.cols()) throw numerical_error("jacobi_dense_sym: matrix must be square");
    double asym = 0.0;
    for (index_t i = 0; i < a.rows(); ++i)
        for (index_t j = 0; j < a.cols(); ++j) asym = std::max(asym, std::abs(a(i, j) - a(j, i)));
    if (asym > 1e-12 * std::max(1.0, a.max_abs()))
        throw numerical_error("jacobi_dense_sym: matrix is not symmetric");
    return jacobi_impl(a, nullptr);
}

std::vector<double> jacobi_dense_sym(const RealMatrix& a, RealMatrix& v) {
    if (a.rows() != a.cols()) throw numerical_error("jacobi_dense_sym: matrix must be square");
    double asym = 0.0;
    for (index_t i = 0; i < a.rows(); ++i)
        for (index_t j = 0; j < a.cols(); ++j) asym = std::max(asym, std::abs(a(i, j) - a(j, i)));
    if (asym > 1e-12 * std::max(1.0, a.max_abs()))
        throw numerical_error("jacobi_dense_sym: matrix is not symmetric");
    return jacobi_impl(a, &v);
}

std::vector<double> hermitian_eigs(const ComplexMatrix& a) {
    const index_t n = a.rows();
    if (n != a.cols()) throw numerical_error("hermitian_eigs: matrix must be square");
    double dev = 0.0;
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < n; ++j) dev = std::max(dev, std::abs(a(i, j) - std::conj(a(j, i))));
    if (dev > 1e-12 * std::max(1.0, a.max_abs()))
        throw numerical_error("hermitian_eigs: matrix is not Hermitian");

    RealMatrix e(2 * n, 2 * n);
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < n; ++j) {
            const double re = a(i, j).real(), im = a(i, j).imag();
            e(i, j) = re;
            e(i + n, j + n) = re;
            e(i, j + n) = -im;
            e(i + n, j) = im;
        }
    // exact symmetrization of the embedding (Hermiticity deviation is tiny)
    for (index_t i = 0; i < 2 * n; ++i)
        for (index_t j = i + 1; j < 2 * n; ++j) {
            const double m = 0.5 * (e(i, j) + e(j, i));
            e(i, j) = m;
            e(j, i) = m;
        }
    std::vector<double> all = jacobi_impl(e, nullptr);
    std::vector<double> out(static_cast<size_t>(n));
    for (index_t i = 0; i < n; ++i) out[static_cast<size_t>(i)] = all[static_cast<size_t>(2 * i)];
    return out;
}

} // namespace dimred::numkernel
