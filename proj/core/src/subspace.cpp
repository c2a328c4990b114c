#include "dimred/subspace.hpp"

#include <algorithm>
#include <cmath>

#include "dimred/jacobi.hpp"
#include "dimred/matrix.hpp"
#include "dimred/rng.hpp"

namespace dimred::numkernel {

namespace {

double mdot(const std::vector<double>& m, const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += m[i] * x[i] * y[i];
    return s;
}

// modified Gram-Schmidt in the M inner product; returns false on rank loss
bool m_orthonormalize(const std::vector<double>& m, std::vector<std::vector<double>>& x, Rng& rng) {
    for (size_t c = 0; c < x.size(); ++c) {
        for (int attempt = 0; attempt < 3; ++attempt) {
            for (size_t p = 0; p < c; ++p) {
                const double proj = mdot(m, x[p], x[c]);
                for (size_t t = 0; t < x[c].size(); ++t) x[c][t] -= proj * x[p][t];
            }
            const double nrm = std::sqrt(mdot(m, x[c], x[c]));
            if (nrm > 1e-10) {
                for (double& v : x[c]) v /= nrm;
                break;
            }
            if (attempt == 2) return false;
            for (double& v : x[c]) v = rng.uniform(-1.0, 1.0);
        }
    }
    return true;
}

} // namespace

SubspaceResult lowest_pencil_eigs(const RealAction& solve, const RealAction& apply_a,
                                  const std::vector<double>& mass, index_t dim, index_t k,
                                  double sigma, const SubspaceOptions& opts) {
    if (k < 1 || k > dim) throw numerical_error("lowest_pencil_eigs: need 1 <= k <= dim");
    const index_t b = std::min<index_t>(dim, k + opts.block_extra);
    Rng rng(opts.seed);

    std::vector<std::vector<double>> x(static_cast<size_t>(b),
                                       std::vector<double>(static_cast<size_t>(dim)));
    for (auto& col : x)
        for (double& v : col) v = rng.uniform(-1.0, 1.0);
    if (!m_orthonormalize(mass, x, rng))
        throw numerical_error("lowest_pencil_eigs: start block is rank deficient");

    std::vector<double> prev;
    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        // X <- (A - sigma M)^{-1} M X, then re-orthonormalize
        for (auto& col : x) {
            std::vector<double> mx(col.size());
            for (size_t t = 0; t < col.size(); ++t) mx[t] = mass[t] * col[t];
            col = solve(mx);
        }
        if (!m_orthonormalize(mass, x, rng))
            throw numerical_error("lowest_pencil_eigs: block collapsed");

        // Rayleigh-Ritz on the original pencil
        std::vector<std::vector<double>> ax(static_cast<size_t>(b));
        for (index_t c = 0; c < b; ++c) ax[static_cast<size_t>(c)] = apply_a(x[static_cast<size_t>(c)]);
        RealMatrix h(b, b);
        for (index_t i = 0; i < b; ++i)
            for (index_t j = 0; j < b; ++j) {
                double s = 0.0;
                for (size_t t = 0; t < x[static_cast<size_t>(i)].size(); ++t)
                    s += x[static_cast<size_t>(i)][t] * ax[static_cast<size_t>(j)][t];
                h(i, j) = s;
            }
        for (index_t i = 0; i < b; ++i)
            for (index_t j = i + 1; j < b; ++j) {
                const double m2 = 0.5 * (h(i, j) + h(j, i));
                h(i, j) = m2;
                h(j, i) = m2;
            }
        RealMatrix u(b, b);
        std::vector<double> ritz = jacobi_dense_sym(h, u);

        // rotate the block onto the Ritz directions
        std::vector<std::vector<double>> xr(static_cast<size_t>(b),
                                            std::vector<double>(static_cast<size_t>(dim), 0.0));
        for (index_t c = 0; c < b; ++c)
            for (index_t p = 0; p < b; ++p) {
                const double w = u(p, c);
                if (w == 0.0) continue;
                for (size_t t = 0; t < xr[static_cast<size_t>(c)].size(); ++t)
                    xr[static_cast<size_t>(c)][t] += w * x[static_cast<size_t>(p)][t];
            }
        x = std::move(xr);

        bool stable = prev.size() == ritz.size();
        if (stable)
            for (index_t i = 0; i < k; ++i) {
                const double scale = std::max(1.0, std::abs(ritz[static_cast<size_t>(i)]));
                if (std::abs(ritz[static_cast<size_t>(i)] - prev[static_cast<size_t>(i)]) > opts.tol * scale) {
                    stable = false;
                    break;
                }
            }
        prev = ritz;
        if (!stable) continue;

        // residual check on the wanted pairs; the scale uses the block's
        // spectral magnitude so a zero mode does not defeat the relative test
        const double spectral_scale = std::max({std::abs(ritz.front()), std::abs(ritz.back()),
                                                std::abs(sigma), 1.0});
        bool ok = true;
        for (index_t i = 0; i < k && ok; ++i) {
            const std::vector<double>& v = x[static_cast<size_t>(i)];
            std::vector<double> r = apply_a(v);
            double nmv = 0.0, nr = 0.0;
            for (size_t t = 0; t < r.size(); ++t) {
                nmv += sqr(mass[t] * v[t]);
                r[t] -= ritz[static_cast<size_t>(i)] * mass[t] * v[t];
                nr += r[t] * r[t];
            }
            if (std::sqrt(nr) > opts.res_tol * spectral_scale * std::sqrt(nmv)) ok = false;
        }
        if (ok) {
            SubspaceResult res;
            res.iterations = iter;
            res.values.assign(ritz.begin(), ritz.begin() + k);
            res.vectors.assign(x.begin(), x.begin() + k);
            return res;
        }
    }
    throw convergence_error("lowest_pencil_eigs: no convergence (shift or block size unsuitable)");
}

} // namespace dimred::numkernel
