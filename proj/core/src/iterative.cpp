#include "dimred/iterative.hpp"

#include <cmath>

#include "dimred/lu.hpp"
#include "dimred/lanczos.hpp"
#include "dimred/rng.hpp"

namespace dimred::numkernel {

namespace {

double wnorm2(const std::vector<double>& w, const std::vector<cplx>& x) {
    double s = 0.0;
    if (w.empty()) {
        for (const cplx& v : x) s += std::norm(v);
    } else {
        for (size_t k = 0; k < x.size(); ++k) s += w[k] * std::norm(x[k]);
    }
    return std::sqrt(s);
}

cplx wdotc(const std::vector<double>& w, const std::vector<cplx>& x, const std::vector<cplx>& y) {
    cplx s{};
    if (w.empty()) {
        for (size_t k = 0; k < x.size(); ++k) s += std::conj(x[k]) * y[k];
    } else {
        for (size_t k = 0; k < x.size(); ++k) s += w[k] * std::conj(x[k]) * y[k];
    }
    return s;
}

std::vector<cplx> seeded_start(index_t dim, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<cplx> v(static_cast<size_t>(dim));
    for (cplx& x : v) x = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    return v;
}

} // namespace

double operator_norm(const ComplexAction& apply, const ComplexAction& apply_adjoint,
                     index_t dim, double tol, const PowerOptions& opts) {
    std::vector<cplx> v = seeded_start(dim, opts.seed);
    {
        const double n0 = wnorm2(opts.weight, v);
        for (cplx& x : v) x /= n0;
    }
    double lambda = 0.0;
    int settled = 0;
    for (int it = 0; it < opts.max_iter; ++it) {
        std::vector<cplx> u = apply(v);
        std::vector<cplx> w = apply_adjoint(u);
        const double lnew = std::real(wdotc(opts.weight, v, w)); // = |apply v|^2 >= 0
        const double nw = wnorm2(opts.weight, w);
        if (nw <= 1e-300) return 0.0; // operator is (numerically) zero on the iterate
        for (cplx& x : w) x /= nw;
        v = std::move(w);
        if (it > 0 && std::abs(lnew - lambda) <= tol * std::max(lnew, 1e-300)) {
            if (++settled >= 3) return std::sqrt(lnew);
        } else {
            settled = 0;
        }
        lambda = lnew;
    }
    throw convergence_error("operator_norm: power iteration did not converge");
}

namespace {

template <class T>
double smallest_singular_impl(const DenseMatrix<T>& a, double tol) {
    if (a.rows() != a.cols()) throw numerical_error("smallest_singular: matrix must be square");
    LuFactor<T> f(a);
    if (f.singular()) return 0.0;
    Rng rng(4242);
    const index_t n = a.rows();
    std::vector<T> v(static_cast<size_t>(n));
    for (T& x : v) {
        if constexpr (std::is_same_v<T, double>)
            x = rng.uniform(-1.0, 1.0);
        else
            x = cplx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    }
    {
        const double n0 = norm2(v);
        for (T& x : v) x /= n0;
    }
    double theta = 0.0;
    int settled = 0;
    for (int it = 0; it < 20000; ++it) {
        std::vector<T> y = f.solve_adjoint(v);
        std::vector<T> x = f.solve(y);
        // theta -> 1 / sigma_min^2
        double tnew = 0.0;
        for (size_t k = 0; k < x.size(); ++k) tnew += std::real(conj_scalar(v[k]) * x[k]);
        const double nx = norm2(x);
        if (!(nx > 0.0)) return 0.0;
        for (T& w : x) w /= nx;
        v = std::move(x);
        // clustered singular values settle slowly; relax the target with the
        // iteration count (any estimate inside the cluster is acceptable)
        const double tol_eff = tol * (it < 2000 ? 1.0 : (it < 8000 ? 1e2 : 1e4));
        if (it > 0 && std::abs(tnew - theta) <= tol_eff * std::max(std::abs(tnew), 1e-300)) {
            if (++settled >= 3) return 1.0 / std::sqrt(tnew);
        } else {
            settled = 0;
        }
        theta = tnew;
    }
    throw convergence_error("smallest_singular: inverse iteration did not converge");
}

} // namespace

double smallest_singular(const ComplexMatrix& a, double tol) { return smallest_singular_impl(a, tol); }
double smallest_singular(const RealMatrix& a, double tol) { return smallest_singular_impl(a, tol); }

cplx shifted_inverse_eig(const ComplexAction& solve, index_t dim, cplx z0, double tol,
                         const ShiftedInverseOptions& opts, std::vector<cplx>& eigvec_out) {
    std::vector<cplx> v = opts.start;
    if (v.empty()) v = seeded_start(dim, opts.seed);
    if (opts.project) opts.project(v);
    {
        const double n0 = wnorm2(opts.weight, v);
        if (!(n0 > 0.0)) throw numerical_error("shifted_inverse_eig: degenerate start vector");
        for (cplx& x : v) x /= n0;
    }
    cplx lambda{};
    int settled = 0;
    for (int it = 0; it < opts.max_iter; ++it) {
        std::vector<cplx> w = solve(v);
        if (opts.project) opts.project(w);
        const cplx theta = wdotc(opts.weight, v, w);
        if (std::abs(theta) <= 1e-300)
            throw convergence_error("shifted_inverse_eig: Rayleigh quotient vanished");
        const cplx lnew = z0 + 1.0 / theta;
        const double nw = wnorm2(opts.weight, w);
        if (!(nw > 0.0)) throw convergence_error("shifted_inverse_eig: iterate vanished");
        for (cplx& x : w) x /= nw;
        v = std::move(w);
        if (it > 0 && std::abs(lnew - lambda) <= tol * std::max(1.0, std::abs(lnew))) {
            if (++settled >= 2) {
                eigvec_out = v;
                return lnew;
            }
        } else {
            settled = 0;
        }
        lambda = lnew;
    }
    throw convergence_error("shifted_inverse_eig: no convergence (shift too far or defective)");
}

cplx shifted_inverse_eig(const ComplexAction& solve, index_t dim, cplx z0, double tol,
                         const ShiftedInverseOptions& opts) {
    std::vector<cplx> vec;
    return shifted_inverse_eig(solve, dim, z0, tol, opts, vec);
}

namespace {

/// Dense complex Cholesky B = L L*; throws numerical_error when B is not
/// positive definite.
ComplexMatrix cholesky(const ComplexMatrix& b) {
    const index_t n = b.rows();
    ComplexMatrix l(n, n);
    for (index_t j = 0; j < n; ++j) {
        double d = std::real(b(j, j));
        for (index_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
        if (!(d > 0.0)) throw numerical_error("hermitian_pencil_smallest: B is not positive definite");
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (index_t i = j + 1; i < n; ++i) {
            cplx s = b(i, j);
            for (index_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / ljj;
        }
    }
    return l;
}

std::vector<cplx> lower_solve(const ComplexMatrix& l, std::vector<cplx> x) {
    const index_t n = l.rows();
    for (index_t i = 0; i < n; ++i) {
        cplx s = x[static_cast<size_t>(i)];
        for (index_t j = 0; j < i; ++j) s -= l(i, j) * x[static_cast<size_t>(j)];
        x[static_cast<size_t>(i)] = s / l(i, i);
    }
    return x;
}

std::vector<cplx> lower_adjoint_solve(const ComplexMatrix& l, std::vector<cplx> x) {
    const index_t n = l.rows();
    for (index_t i = n - 1; i >= 0; --i) {
        cplx s = x[static_cast<size_t>(i)];
        for (index_t j = i + 1; j < n; ++j) s -= std::conj(l(j, i)) * x[static_cast<size_t>(j)];
        x[static_cast<size_t>(i)] = s / std::conj(l(i, i));
    }
    return x;
}

} // namespace

double hermitian_pencil_smallest(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
    const index_t n = a.rows();
    if (n != a.cols() || n != b.rows() || n != b.cols())
        throw numerical_error("hermitian_pencil_smallest: square matrices required");
    const ComplexMatrix l = cholesky(b);

    // C = L^{-1} A L^{-*} by column solves
    ComplexMatrix c(n, n);
    std::vector<cplx> e(static_cast<size_t>(n));
    for (index_t j = 0; j < n; ++j) {
        std::fill(e.begin(), e.end(), cplx{});
        e[static_cast<size_t>(j)] = 1.0;
        std::vector<cplx> col = lower_adjoint_solve(l, e);        // L^{-*} e_j
        col = a.apply(col);
        col = lower_solve(l, col);                                // L^{-1} A L^{-*} e_j
        for (index_t i = 0; i < n; ++i) c(i, j) = col[static_cast<size_t>(i)];
    }
    // enforce exact Hermiticity against roundoff
    for (index_t i = 0; i < n; ++i)
        for (index_t j = i; j < n; ++j) {
            const cplx m = 0.5 * (c(i, j) + std::conj(c(j, i)));
            c(i, j) = m;
            c(j, i) = std::conj(m);
        }

    double lower = std::real(c(0, 0));
    for (index_t i = 0; i < n; ++i) {
        double r = 0.0;
        for (index_t j = 0; j < n; ++j)
            if (i != j) r += std::abs(c(i, j));
        lower = std::min(lower, std::real(c(i, i)) - r);
    }
    const double scale = std::max(1.0, c.max_abs());

    // locate the bottom of the (well-conditioned) congruence by Lanczos on
    // its real embedding, then polish by one shifted inverse iteration; the
    // Gershgorin bound guards the shift placement
    double estimate;
    {
        auto apply_embedded = [&](const std::vector<double>& x) {
            std::vector<cplx> z(static_cast<size_t>(n));
            for (index_t i = 0; i < n; ++i)
                z[static_cast<size_t>(i)] = {x[static_cast<size_t>(i)], x[static_cast<size_t>(i + n)]};
            std::vector<cplx> w = c.apply(z);
            std::vector<double> y(static_cast<size_t>(2 * n));
            for (index_t i = 0; i < n; ++i) {
                y[static_cast<size_t>(i)] = w[static_cast<size_t>(i)].real();
                y[static_cast<size_t>(i + n)] = w[static_cast<size_t>(i)].imag();
            }
            return y;
        };
        LanczosOptions lopts;
        lopts.max_iter = static_cast<int>(std::min<index_t>(2 * n, 400));
        lopts.tol = 1e-12;
        estimate = lanczos_sym(apply_embedded, 2 * n, 1, LanczosWhich::Smallest, lopts).values.front();
    }
    double shift = std::max(lower - 1.0, estimate - 1e-4 * scale);

    Rng rng(31337);
    std::vector<cplx> v(static_cast<size_t>(n));
    for (cplx& x : v) x = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    ComplexMatrix cs = c;
    for (index_t i = 0; i < n; ++i) cs(i, i) -= shift;
    LuFactor<cplx> f(cs);
    if (f.singular()) throw numerical_error("hermitian_pencil_smallest: shifted solve failed");
    double theta = 0.0;
    int settled = 0;
    for (int it = 0; it < 20000; ++it) {
        std::vector<cplx> w = f.solve(v);
        double tnew = 0.0;
        for (size_t k = 0; k < w.size(); ++k) tnew += std::real(std::conj(v[k]) * w[k]);
        const double nw = norm2(w);
        if (!(nw > 0.0)) throw convergence_error("hermitian_pencil_smallest: breakdown");
        for (cplx& x : w) x /= nw;
        v = std::move(w);
        if (it > 0 && std::abs(tnew - theta) <= tol * std::max(std::abs(tnew), 1e-300)) {
            if (++settled >= 3) return shift + 1.0 / tnew;
        } else {
            settled = 0;
        }
        theta = tnew;
    }
    throw convergence_error("hermitian_pencil_smallest: inverse iteration did not converge");
}

} // namespace dimred::numkernel
