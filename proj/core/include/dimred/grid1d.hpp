#pragma once

#include <functional>
#include <vector>

#include "dimred/matrix.hpp"

namespace dimred::grid1d {

using numkernel::DenseMatrix;

/// Form pencil of -d^2/ds^2 + V(s) on a periodic uniform grid: stiffness
/// plus potential mass against the diagonal mass h*I. Shared by every
/// module that builds an effective operator on the cross-section, so
/// cross-model matrix identities hold entrywise.
template <class T>
struct PeriodicPencil {
    index_t n = 0;
    double h = 0.0;
    DenseMatrix<T> a;          // K + diag(V_i * h), with the corner couplings
    std::vector<double> mass;  // h per node
};

template <class T>
PeriodicPencil<T> periodic_pencil(const std::function<T(double)>& potential, index_t n, double period) {
    if (n < 3) throw numerical_error("periodic_pencil: n >= 3 required");
    PeriodicPencil<T> p;
    p.n = n;
    p.h = period / static_cast<double>(n);
    p.a = DenseMatrix<T>(n, n);
    p.mass.assign(static_cast<size_t>(n), p.h);
    const double w = 1.0 / p.h;
    for (index_t i = 0; i < n; ++i) {
        const index_t j = (i + 1) % n;
        p.a(i, i) += w;
        p.a(j, j) += w;
        p.a(i, j) -= w;
        p.a(j, i) -= w;
    }
    for (index_t i = 0; i < n; ++i) p.a(i, i) += potential(p.h * static_cast<double>(i)) * p.h;
    return p;
}

/// k lowest eigenvalues of the real periodic pencil (dense shift-invert
/// Lanczos; the shift sits below a Gershgorin bound of the quotient).
std::vector<double> periodic_eigs(const PeriodicPencil<double>& p, index_t k);

/// Richardson-extrapolated eigenvalues from the (n, 2n) grid pair; the
/// reported error estimate is the observed leading-order term.
struct RichardsonEigs {
    std::vector<double> values;     // extrapolated
    std::vector<double> coarse;     // raw at n
    std::vector<double> fine;       // raw at 2n
    double error_estimate = 0.0;    // max_k |fine - coarse| / 3
};

RichardsonEigs periodic_eigs_richardson(const std::function<double(double)>& potential, index_t n,
                                        double period, index_t k);

} // namespace dimred::grid1d
