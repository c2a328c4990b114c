#pragma once

#include <functional>
#include <vector>

#include "dimred/types.hpp"

namespace dimred::numkernel {

using RealAction = std::function<std::vector<double>(const std::vector<double>&)>;

struct SubspaceOptions {
    int max_iter = 500;
    double tol = 1e-12;      // relative Ritz stabilization
    double res_tol = 1e-9;   // relative residual ||Ax - lambda Mx||
    int block_extra = 2;
    std::uint64_t seed = 2718;
};

struct SubspaceResult {
    std::vector<double> values;               // k lowest, ascending
    std::vector<std::vector<double>> vectors; // M-orthonormal Ritz vectors
    int iterations = 0;
};

/// k lowest eigenvalues of the symmetric pencil (A, M) with M a positive
/// diagonal, by block shift-invert subspace iteration with Rayleigh-Ritz.
/// `solve` applies (A - sigma M)^{-1}; sigma must sit strictly below the
/// spectrum. Resolves multiple and clustered eigenvalues, which single-vector
/// Lanczos cannot.
SubspaceResult lowest_pencil_eigs(const RealAction& solve, const RealAction& apply_a,
                                  const std::vector<double>& mass, index_t dim, index_t k,
                                  double sigma, const SubspaceOptions& opts = {});

} // namespace dimred::numkernel
