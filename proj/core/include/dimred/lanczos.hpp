#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "dimred/matrix.hpp"
#include "dimred/rng.hpp"
#include "dimred/tridiag.hpp"

namespace dimred::numkernel {

struct LanczosOptions {
    int max_iter = 300;
    double tol = 1e-12;        // relative stabilization of the wanted Ritz values
    std::uint64_t seed = 12345;
    // optional diagonal weight defining the inner product (empty = euclidean);
    // the action must be self-adjoint w.r.t. this inner product
    std::vector<double> weight;
};

enum class LanczosWhich { Smallest, Largest };

struct LanczosResult {
    std::vector<double> values;                 // k extreme eigenvalues, ascending
    std::vector<std::vector<double>> vectors;   // matching Ritz vectors
    int iterations = 0;
};

/// Lanczos with full reorthogonalization against the stored basis.
/// The caller guarantees self-adjointness of `apply` w.r.t. the weight.
LanczosResult lanczos_sym(const std::function<std::vector<double>(const std::vector<double>&)>& apply,
                          index_t dim, index_t k, LanczosWhich which, const LanczosOptions& opts);

/// k lowest eigenvalues per the numkernel contract (euclidean inner product
/// unless opts.weight says otherwise).
std::vector<double> lanczos_lowest(const std::function<std::vector<double>(const std::vector<double>&)>& apply,
                                   index_t dim, index_t k, const LanczosOptions& opts = {});

} // namespace dimred::numkernel
