#pragma once

#include <functional>
#include <vector>

#include "dimred/matrix.hpp"

namespace dimred::numkernel {

using ComplexAction = std::function<std::vector<cplx>(const std::vector<cplx>&)>;

struct PowerOptions {
    int max_iter = 20000;
    std::uint64_t seed = 777;
    // optional positive diagonal defining the inner product
    std::vector<double> weight;
};

/// Operator norm via power iteration on adjoint∘apply with a deterministic
/// seeded start vector; returns sqrt of the dominant eigenvalue within
/// relative tolerance tol. apply_adjoint must be the true adjoint w.r.t.
/// the declared (possibly weighted) inner product.
double operator_norm(const ComplexAction& apply, const ComplexAction& apply_adjoint,
                     index_t dim, double tol, const PowerOptions& opts = {});

/// Smallest singular value via inverse power iteration on A*A through LU
/// solves. Singular input maps to 0 instead of an error.
double smallest_singular(const ComplexMatrix& a, double tol = 1e-10);
double smallest_singular(const RealMatrix& a, double tol = 1e-10);

struct ShiftedInverseOptions {
    int max_iter = 500;
    std::uint64_t seed = 99;
    std::vector<double> weight;
    // start vector override (used for conjugation-symmetric runs)
    std::vector<cplx> start;
    // optional per-iteration deflation hook (orthogonalize against converged)
    std::function<void(std::vector<cplx>&)> project;
};

/// Eigenvalue of the pencil nearest z0 from the action of (A - z0 M)^{-1} M.
/// The solve callback throws if z0 is (numerically) an eigenvalue.
cplx shifted_inverse_eig(const ComplexAction& solve, index_t dim, cplx z0, double tol,
                         const ShiftedInverseOptions& opts = {});
cplx shifted_inverse_eig(const ComplexAction& solve, index_t dim, cplx z0, double tol,
                         const ShiftedInverseOptions& opts, std::vector<cplx>& eigvec_out);

/// Smallest eigenvalue of the Hermitian pencil A x = lambda B x with B
/// positive definite (Cholesky), via inverse iteration shifted below a
/// Gershgorin lower bound of the congruence-transformed operator.
double hermitian_pencil_smallest(const ComplexMatrix& a, const ComplexMatrix& b, double tol = 1e-10);

} // namespace dimred::numkernel
