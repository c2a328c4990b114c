#pragma once

#include <vector>

#include "dimred/banded.hpp"
#include "dimred/geometry.hpp"
#include "dimred/tridiag.hpp"

namespace dimred::layer {

using geometry::CurveProfile;

/// Discretized weighted form of the shrinking Dirichlet layer over the
/// curve: s periodic with ns nodes, t in (-1, 1) with nt interior nodes and
/// Dirichlet ends. Flux-midpoint sampling of the weight keeps the stiffness
/// symmetric in the weighted inner product; the common factor eps is kept
/// in both matrices.
struct LayerModel {
    CurveProfile profile;
    double eps;
    index_t ns = 64;
    index_t nt = 64;
};

/// (stiffness, mass) pair in banded storage with s-fast ordering
/// (index = j_t * ns + i_s, bandwidth ns).
struct LayerPencil {
    index_t ns, nt;
    double eps;
    numkernel::BandedMatrix<double> a;
    std::vector<double> mass;
};

/// Weighted transverse fiber at fixed s: tridiagonal stiffness and lumped
/// mass on the interior-vertex t-grid. The same arrays enter the 2-D
/// assembly, so fiber and pencil quotients agree to roundoff.
struct Fiber {
    numkernel::SymTridiag stiffness;
    std::vector<double> mass;
};

Fiber transverse_fiber(const CurveProfile& profile, double s, double eps, index_t nt);

/// j-th transverse eigenvalue mu_j(s, eps), Richardson-extrapolated from the
/// (nt, 2nt+1) pair.
double transverse_eig(const CurveProfile& profile, double s, double eps, index_t j, index_t nt = 256);

/// Raw (single-grid) transverse eigenvalues, lowest j of the fiber at size nt.
std::vector<double> transverse_eigs_raw(const CurveProfile& profile, double s, double eps,
                                        index_t j, index_t nt);

/// Curvature-induced potential V(s) = -kappa(s)^2 / 4 (d = 2).
double curvature_potential(const CurveProfile& profile, double s);

LayerPencil assemble_full(const LayerModel& model);

/// k lowest pencil eigenvalues at the model's grid (no extrapolation).
std::vector<double> layer_eigs_raw(const LayerModel& model, index_t k);

/// Grid-converged eigenvalues: two-parameter Richardson over (2ns, nt) and
/// (ns, 2nt+1) against the base grid removes both second-order errors.
struct LayerEigs {
    std::vector<double> values;
    double error_estimate = 0.0;
};
LayerEigs layer_eigs(const LayerModel& model, index_t k);

/// k lowest eigenvalues of the effective operator -d^2/ds^2 - kappa^2/4.
std::vector<double> effective_sigma_eigs(const CurveProfile& profile, index_t k, index_t ns = 256);

struct LayerFit {
    bool degenerate = false;
    std::vector<double> residuals;  // r_k(eps) per eps
    double slope = 0.0;
    double error_estimate = 0.0;    // discretization error bound on residuals
};

/// Residual r_k(eps) = lambda_k(eps) - pi^2/(4 eps^2) - lambda_k^Sigma and
/// its log-log slope. Refines until the grid error drops below 0.1 |r_k|;
/// throws convergence_error when the refinement budget is exhausted.
LayerFit asymptotic_fit(const CurveProfile& profile, const std::vector<double>& eps_list,
                        index_t k, index_t base_ns = 64, index_t base_nt = 64);

struct LayerSweep {
    std::vector<double> eps;
    std::vector<std::vector<double>> lambdas;   // [eps][k]
    std::vector<std::vector<double>> residuals; // [eps][k]
    std::vector<double> sigma;                  // lambda_k^Sigma per k
    std::vector<double> slopes;                 // per k; 0 when degenerate
    std::vector<bool> degenerate;               // per k
    double error_estimate = 0.0;
};

/// All residual orders k = 1..k_max in one refinement pass over the
/// eps list (each pencil solve already produces every requested level).
LayerSweep layer_sweep(const CurveProfile& profile, const std::vector<double>& eps_list,
                       index_t k_max, index_t base_ns = 64, index_t base_nt = 64,
                       int max_levels = 3);

struct WindowCheckRecord {
    double mu = 0.0;        // inf_s mu_1(s, eps) on the grid
    double gamma = 0.0;     // inf mu_2 - inf mu_1
    double a = 0.0;         // measured ||[S, Pi]|| / sqrt(gamma)
    double r_hat = 0.0;
    double dist = 0.0;      // distance of z to the discrete effective spectrum
    bool gate = false;
    double margin = 0.0;
    double certified_inv = 0.0;
    double certified_diff = 0.0;
};

/// Certificate evaluation in the window |z - mu(eps)| <= C0,
/// dist(z, effective spectrum) >= c0, with the commutator measured on the
/// discretized pencil through the fiber ground-state projectors.
WindowCheckRecord resolvent_window_check(const LayerModel& model, double z, double c0, double C0);

} // namespace dimred::layer
