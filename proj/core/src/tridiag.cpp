#include "dimred/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dimred/types.hpp"

namespace dimred::numkernel {

void SymTridiag::validate() const {
    if (diag.empty()) throw numerical_error("SymTridiag: n >= 1 required");
    if (offdiag.size() + 1 != diag.size())
        throw numerical_error("SymTridiag: offdiag must have length n-1");
    for (double v : diag)
        if (!std::isfinite(v)) throw numerical_error("SymTridiag: non-finite diagonal entry");
    for (double v : offdiag)
        if (!std::isfinite(v)) throw numerical_error("SymTridiag: non-finite offdiagonal entry");
}

int sturm_count(const SymTridiag& t, double x) {
    const index_t n = t.size();
    // tiny pivots count as negative (LAPACK convention); scaling by the
    // largest squared coupling keeps the recurrence inside the exponent range
    double max_e2 = 1.0;
    for (double e : t.offdiag) max_e2 = std::max(max_e2, e * e);
    const double pivmin = 1e-290 * max_e2;
    int count = 0;
    double q = t.diag[0] - x;
    for (index_t i = 0;;) {
        if (std::abs(q) < pivmin) q = -pivmin;
        if (q < 0.0) ++count;
        if (++i >= n) break;
        const double e = t.offdiag[static_cast<size_t>(i - 1)];
        q = (t.diag[static_cast<size_t>(i)] - x) - e * e / q;
    }
    return count;
}

std::vector<double> sym_tridiag_eigs(const SymTridiag& t, index_t k) {
    t.validate();
    const index_t n = t.size();
    if (k < 1 || k > n) throw numerical_error("sym_tridiag_eigs: need 1 <= k <= n");

    // Gershgorin bracket for the whole spectrum.
    double lo = t.diag[0], hi = t.diag[0];
    for (index_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(t.offdiag[static_cast<size_t>(i - 1)]);
        if (i + 1 < n) r += std::abs(t.offdiag[static_cast<size_t>(i)]);
        lo = std::min(lo, t.diag[static_cast<size_t>(i)] - r);
        hi = std::max(hi, t.diag[static_cast<size_t>(i)] + r);
    }
    lo -= 1.0;
    hi += 1.0;

    std::vector<double> eigs(static_cast<size_t>(k));
    for (index_t j = 0; j < k; ++j) {
        double a = lo, b = hi;
        // find the j-th eigenvalue (0-based): count(x) > j  <=>  lambda_j < x
        while (true) {
            const double mid = 0.5 * (a + b);
            const double tol = 0.5e-12 * std::max(1.0, std::abs(mid));
            if (b - a <= tol || mid == a || mid == b) break;
            if (sturm_count(t, mid) > static_cast<int>(j))
                b = mid;
            else
                a = mid;
        }
        eigs[static_cast<size_t>(j)] = 0.5 * (a + b);
        lo = a; // eigenvalues are requested in ascending order
    }
    return eigs;
}

std::vector<double> sym_tridiag_eigenvector(const SymTridiag& t, double lambda) {
    const index_t n = t.size();
    // shift slightly off the eigenvalue so the shifted solve stays regular
    const double shift = lambda + 1e-11 * std::max(1.0, std::abs(lambda));
    std::vector<double> v(static_cast<size_t>(n), 1.0);
    for (index_t i = 0; i < n; ++i)
        v[static_cast<size_t>(i)] = 1.0 / std::sqrt(static_cast<double>(n) + static_cast<double>(i));

    for (int iter = 0; iter < 4; ++iter) {
        // Thomas solve of (T - shift) x = v with partial safeguarding
        std::vector<double> d(static_cast<size_t>(n)), rhs = v;
        std::vector<double> e = t.offdiag;
        for (index_t i = 0; i < n; ++i) d[static_cast<size_t>(i)] = t.diag[static_cast<size_t>(i)] - shift;
        for (index_t i = 1; i < n; ++i) {
            double& dp = d[static_cast<size_t>(i - 1)];
            if (std::abs(dp) < 1e-300) dp = (dp < 0 ? -1e-300 : 1e-300);
            const double m = e[static_cast<size_t>(i - 1)] / dp;
            d[static_cast<size_t>(i)] -= m * e[static_cast<size_t>(i - 1)];
            rhs[static_cast<size_t>(i)] -= m * rhs[static_cast<size_t>(i - 1)];
        }
        std::vector<double> x(static_cast<size_t>(n));
        {
            double& dn = d[static_cast<size_t>(n - 1)];
            if (std::abs(dn) < 1e-300) dn = (dn < 0 ? -1e-300 : 1e-300);
        }
        x[static_cast<size_t>(n - 1)] = rhs[static_cast<size_t>(n - 1)] / d[static_cast<size_t>(n - 1)];
        for (index_t i = n - 2; i >= 0; --i)
            x[static_cast<size_t>(i)] = (rhs[static_cast<size_t>(i)] -
                                         e[static_cast<size_t>(i)] * x[static_cast<size_t>(i + 1)]) /
                                        d[static_cast<size_t>(i)];
        double nrm = 0.0;
        for (double w : x) nrm += w * w;
        nrm = std::sqrt(nrm);
        if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
        for (index_t i = 0; i < n; ++i) v[static_cast<size_t>(i)] = x[static_cast<size_t>(i)] / nrm;
    }
    return v;
}

} // namespace dimred::numkernel
