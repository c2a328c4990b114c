#include "dimred/grid1d.hpp"

#include <algorithm>
#include <cmath>

#include "dimred/lu.hpp"
#include "dimred/subspace.hpp"

namespace dimred::grid1d {

using numkernel::LuFactor;
using numkernel::RealMatrix;

std::vector<double> periodic_eigs(const PeriodicPencil<double>& p, index_t k) {
    const index_t n = p.n;
    if (k < 1 || k > n) throw numerical_error("periodic_eigs: need 1 <= k <= n");

    // Gershgorin lower bound of the mass-scaled operator A/h
    double lower = 1e300;
    for (index_t i = 0; i < n; ++i) {
        double r = 0.0;
        for (index_t j = 0; j < n; ++j)
            if (i != j) r += std::abs(p.a(i, j));
        lower = std::min(lower, (p.a(i, i) - r) / p.h);
    }
    const double sigma = lower - 1.0;

    RealMatrix shifted = p.a;
    for (index_t i = 0; i < n; ++i) shifted(i, i) -= sigma * p.mass[static_cast<size_t>(i)];
    LuFactor<double> f(shifted);
    if (f.singular()) throw numerical_error("periodic_eigs: shifted pencil is singular");

    auto solve = [&](const std::vector<double>& x) { return f.solve(x); };
    auto apply_a = [&](const std::vector<double>& x) { return p.a.apply(x); };
    return numkernel::lowest_pencil_eigs(solve, apply_a, p.mass, n, k, sigma).values;
}

RichardsonEigs periodic_eigs_richardson(const std::function<double(double)>& potential, index_t n,
                                        double period, index_t k) {
    RichardsonEigs r;
    PeriodicPencil<double> pc = periodic_pencil<double>(potential, n, period);
    PeriodicPencil<double> pf = periodic_pencil<double>(potential, 2 * n, period);
    r.coarse = periodic_eigs(pc, k);
    r.fine = periodic_eigs(pf, k);
    r.values.resize(static_cast<size_t>(k));
    for (index_t i = 0; i < k; ++i) {
        const double c = r.coarse[static_cast<size_t>(i)], fety = r.fine[static_cast<size_t>(i)];
        r.values[static_cast<size_t>(i)] = (4.0 * fety - c) / 3.0;
        r.error_estimate = std::max(r.error_estimate, std::abs(fety - c) / 3.0);
    }
    return r;
}

} // namespace dimred::grid1d
