#include "dimred/lanczos.hpp"

namespace dimred::numkernel {

namespace {

double wdot(const std::vector<double>& w, const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    if (w.empty()) {
        for (size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
    } else {
        for (size_t k = 0; k < x.size(); ++k) s += w[k] * x[k] * y[k];
    }
    return s;
}

} // namespace

LanczosResult lanczos_sym(const std::function<std::vector<double>(const std::vector<double>&)>& apply,
                          index_t dim, index_t k, LanczosWhich which, const LanczosOptions& opts) {
    if (k < 1 || k > dim) throw numerical_error("lanczos_sym: need 1 <= k <= dim");
    const int max_iter = std::min<int>(opts.max_iter, static_cast<int>(dim));

    Rng rng(opts.seed);
    std::vector<std::vector<double>> basis;
    basis.reserve(static_cast<size_t>(max_iter));

    std::vector<double> alpha, beta;
    std::vector<double> v(static_cast<size_t>(dim));
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    {
        const double n0 = std::sqrt(wdot(opts.weight, v, v));
        for (double& x : v) x /= n0;
    }

    std::vector<double> prev_ritz;
    int m = 0;
    while (m < max_iter) {
        basis.push_back(v);
        std::vector<double> w = apply(v);
        const double a = wdot(opts.weight, v, w);
        alpha.push_back(a);

        // full reorthogonalization, two passes
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& u : basis) {
                const double c = wdot(opts.weight, u, w);
                for (size_t t = 0; t < w.size(); ++t) w[t] -= c * u[t];
            }

        double b = std::sqrt(std::max(0.0, wdot(opts.weight, w, w)));
        ++m;

        // Ritz values of the current tridiagonal section
        if (m >= static_cast<int>(k)) {
            SymTridiag tm{alpha, beta};
            std::vector<double> ritz;
            if (which == LanczosWhich::Smallest) {
                ritz = sym_tridiag_eigs(tm, k);
            } else {
                SymTridiag neg{alpha, beta};
                for (double& d : neg.diag) d = -d;
                ritz = sym_tridiag_eigs(neg, k);
                for (double& r : ritz) r = -r;
                std::sort(ritz.begin(), ritz.end());
            }
            bool stable = !prev_ritz.empty() && prev_ritz.size() == ritz.size();
            if (stable) {
                for (size_t t = 0; t < ritz.size(); ++t) {
                    const double scale = std::max(1.0, std::abs(ritz[t]));
                    if (std::abs(ritz[t] - prev_ritz[t]) > opts.tol * scale) { stable = false; break; }
                }
            }
            prev_ritz = ritz;
            if (stable || m == static_cast<int>(dim)) {
                // assemble Ritz vectors from tridiagonal eigenvectors
                LanczosResult res;
                res.values = ritz;
                res.iterations = m;
                for (double lambda : ritz) {
                    std::vector<double> s = sym_tridiag_eigenvector(tm, lambda);
                    std::vector<double> y(static_cast<size_t>(dim), 0.0);
                    for (int i = 0; i < m; ++i)
                        for (size_t t = 0; t < y.size(); ++t) y[t] += s[static_cast<size_t>(i)] * basis[static_cast<size_t>(i)][t];
                    const double ny = std::sqrt(wdot(opts.weight, y, y));
                    if (ny > 0) for (double& x : y) x /= ny;
                    res.vectors.push_back(std::move(y));
                }
                return res;
            }
        }

        if (m == static_cast<int>(dim)) break;

        if (b <= 1e-14 * std::max(1.0, std::abs(a))) {
            // invariant subspace hit; continue with a fresh orthogonalized vector
            for (double& x : w) x = rng.uniform(-1.0, 1.0);
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& u : basis) {
                    const double c = wdot(opts.weight, u, w);
                    for (size_t t = 0; t < w.size(); ++t) w[t] -= c * u[t];
                }
            b = std::sqrt(std::max(0.0, wdot(opts.weight, w, w)));
            if (b <= 0.0) break;
            beta.push_back(0.0);
        } else {
            beta.push_back(b);
        }
        for (size_t t = 0; t < w.size(); ++t) w[t] /= b;
        v = std::move(w);
    }
    throw convergence_error("lanczos_sym: no convergence within max iterations");
}

std::vector<double> lanczos_lowest(const std::function<std::vector<double>(const std::vector<double>&)>& apply,
                                   index_t dim, index_t k, const LanczosOptions& opts) {
    return lanczos_sym(apply, dim, k, LanczosWhich::Smallest, opts).values;
}

} // namespace dimred::numkernel
