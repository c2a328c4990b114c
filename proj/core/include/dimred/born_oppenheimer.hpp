#pragma once

#include <functional>
#include <vector>

#include "dimred/certificates.hpp"
#include "dimred/sparse.hpp"
#include "dimred/tridiag.hpp"

namespace dimred::bo {

/// Semiclassical two-level model: h^2 D_s^2 acting on both components plus a
/// rotated fiber family R(theta) diag(mu1, mu2) R(theta)^T, truncated to
/// [-R, R] with Dirichlet ends. The analytic tanh mixing angle gives the
/// commutator constant a = h * theta0 / sqrt(gamma) exactly.
struct TwoLevelBOModel {
    double theta0 = 0.3;
    double h = 0.1;
    double radius = 8.0;      // truncation half-width; eigenfunctions decay fast
    index_t base_n = 511;     // initial interior grid size of the refinement loop

    std::function<double(double)> mu1 = [](double s) { return s * s; };
    std::function<double(double)> mu2 = [](double s) { return 1.0 + 2.0 * s * s; };

    // custom mixing angle; empty means the tanh family theta0 * tanh(s)
    std::function<double(double)> theta_fn;
    std::function<double(double)> theta_prime_fn;
    double sup_theta_prime_override = -1.0; // set alongside theta_fn

    double theta(double s) const { return theta_fn ? theta_fn(s) : theta0 * std::tanh(s); }
    double theta_prime(double s) const {
        if (theta_prime_fn) return theta_prime_fn(s);
        const double c = std::cosh(s);
        return theta0 / (c * c);
    }
    double sup_theta_prime() const {
        return sup_theta_prime_override >= 0.0 ? sup_theta_prime_override : std::abs(theta0);
    }
    double gamma() const;                                       // inf mu2 - inf mu1
    double coupling_a() const { return h * sup_theta_prime() / std::sqrt(gamma()); }
};

/// Full 2N x 2N operator on the interleaved grid (second-order central FD).
numkernel::SparseSym assemble_full(const TwoLevelBOModel& model, index_t n);

/// Effective tridiagonal operator h^2 D_s^2 + mu1 + h^2 theta'^2.
numkernel::SymTridiag assemble_effective(const TwoLevelBOModel& model, index_t n);

struct BoLevel {
    index_t n;
    std::vector<double> full;      // k lowest of the full operator
    std::vector<double> effective; // k lowest of the effective operator
};

struct BoEigs {
    std::vector<double> full;       // Richardson-extrapolated
    std::vector<double> effective;  // Richardson-extrapolated
    std::vector<BoLevel> levels;    // raw refinement history
    double error_estimate = 0.0;    // max observed extrapolation change
};

/// Grid-converged lowest eigenvalues: the refinement loop doubles the grid
/// and Richardson-extrapolates until doubling changes the result by less
/// than 1e-6 relative. Throws convergence_error when the refinement budget
/// is exhausted.
BoEigs lowest_eigs(const TwoLevelBOModel& model, index_t k);

struct GapCheckRecord {
    double a = 0.0, gamma = 0.0, r_hat = 0.0, dist = 0.0;
    bool gate = false;
    double margin = 0.0;
    double certified_inv = 0.0;   // bound on ||(L_h - z)^{-1}||
    double certified_diff = 0.0;  // bound on the resolvent difference
};

/// Evaluates the certificate in the spectral window
/// z in [-C0 h, C0 h], dist(z, Sp(L_eff)) >= c0 h, with the spectral-theorem
/// bound R_hat <= 1/(c0 h) + 1/(gamma - C0 h).
GapCheckRecord resolvent_gap_check(const TwoLevelBOModel& model, double z, double c0, double C0);

struct BoFitResult {
    bool degenerate = false;        // differences below 10x grid error
    double slope = 0.0;             // of log|lambda_k - lambda_eff_k| vs log h
    std::vector<double> diffs;      // per h
    std::vector<double> coefficients; // lambda_eff_1(h) / h per h
};

/// Order fit of the eigenvalue differences over a geometric h-list.
BoFitResult asymptotic_fit(const TwoLevelBOModel& base, const std::vector<double>& h_list, index_t k);

} // namespace dimred::bo
