#pragma once

#include <vector>

#include "dimred/banded.hpp"
#include "dimred/geometry.hpp"
#include "dimred/tridiag.hpp"

namespace dimred::shell {

using geometry::CurveProfile;

/// Dirichlet-Robin shell in the large-coupling limit: s periodic, t in
/// (0, 1) with the Robin condition at t = 0 imposed weakly through the
/// boundary term of the form and Dirichlet at t = 1. The t-grid refines
/// geometrically toward t = 0 where the fiber ground state e^{-alpha t}
/// lives.
struct ShellModel {
    CurveProfile profile;
    double alpha;
    index_t ns = 64;
    index_t nt = 0; // 0: pick max(64, 5 * alpha) automatically
};

/// Geometrically graded nodes t_0 = 0 < ... < t_nt = 1; unknowns are the
/// first nt nodes (the Dirichlet end is eliminated).
std::vector<double> shell_t_grid(double alpha, index_t nt);

struct RobinFiber {
    numkernel::SymTridiag stiffness; // includes the -alpha boundary entry
    std::vector<double> mass;
};

RobinFiber transverse_fiber_robin(const CurveProfile& profile, double s, double alpha, index_t nt);

/// Lowest j eigenvalues of the weighted Robin fiber at fixed s (raw grid).
std::vector<double> transverse_eigs_robin_raw(const CurveProfile& profile, double s, double alpha,
                                              index_t j, index_t nt);

/// Richardson-extrapolated j-th fiber eigenvalue mu_j(s, alpha).
double transverse_eig_robin(const CurveProfile& profile, double s, double alpha, index_t j,
                            index_t nt = 800);

/// nu_j(alpha): eigenvalues of D_s^2 - alpha kappa(s), Richardson-converged.
std::vector<double> effective_eigs(const CurveProfile& profile, double alpha, index_t j,
                                   index_t ns = 256);

struct HarmonicFit {
    bool degenerate = false;          // no unique nondegenerate maximum
    std::vector<double> scaled;       // (nu_j + alpha kappa_max) / sqrt(alpha)
    double target = 0.0;              // (2j-1) sqrt(hess/2)
    std::vector<double> deviations;   // |scaled - target|
    double deviation_slope = 0.0;     // log-log slope of the deviation in alpha
};

/// Harmonic-approximation check of the scaled effective eigenvalues along a
/// geometric alpha list.
HarmonicFit harmonic_fit(const CurveProfile& profile, const std::vector<double>& alpha_list,
                         index_t j);

struct ShellPencil {
    index_t ns, nt;
    double alpha;
    numkernel::BandedMatrix<double> a;
    std::vector<double> mass;
};

ShellPencil assemble_full(const ShellModel& model);

/// j most-negative shell eigenvalues by shift-invert iteration at
/// -alpha^2 - alpha kappa_max with deflation; collisions of the shift with
/// an eigenvalue are retried with a perturbed shift.
std::vector<double> shell_eigs_raw(const ShellModel& model, index_t j);

struct ShellEigs {
    std::vector<double> values;    // two-parameter Richardson extrapolation
    double error_estimate = 0.0;
};
ShellEigs shell_eigs(const ShellModel& model, index_t j);

struct ShellWindowRecord {
    double mu = 0.0;
    double gamma = 0.0;
    double a = 0.0;
    double r_hat = 0.0;
    double dist = 0.0;
    bool gate = false;
    double margin = 0.0;
    double certified_inv = 0.0;
    double certified_diff = 0.0;
};

/// Certificate evaluation in the window |z - mu(alpha)| <= c0 alpha with
/// dist(z, effective spectrum) >= C0, commutator measured on the pencil.
ShellWindowRecord resolvent_window_check(const ShellModel& model, double z, double c0, double C0);

} // namespace dimred::shell
