#pragma once

#include <vector>

#include "dimred/types.hpp"

namespace dimred::numkernel {

/// Symmetric tridiagonal matrix: diag has length n, offdiag length n-1.
struct SymTridiag {
    std::vector<double> diag;
    std::vector<double> offdiag;

    index_t size() const { return static_cast<index_t>(diag.size()); }
    void validate() const;
};

/// Number of eigenvalues of T strictly below x (exact Sturm sign count).
int sturm_count(const SymTridiag& t, double x);

/// k smallest eigenvalues by Sturm-sequence bisection, sorted ascending.
/// Each eigenvalue is bracketed to absolute tolerance 1e-12 * max(1, |lambda|);
/// the sign counts are exact, so clustered eigenvalues are handled correctly.
std::vector<double> sym_tridiag_eigs(const SymTridiag& t, index_t k);

/// Eigenvector of T for an isolated eigenvalue estimate, by inverse iteration.
std::vector<double> sym_tridiag_eigenvector(const SymTridiag& t, double lambda);

} // namespace dimred::numkernel
