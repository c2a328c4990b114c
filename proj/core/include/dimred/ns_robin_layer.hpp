#pragma once

#include <vector>

#include "dimred/banded.hpp"
#include "dimred/geometry.hpp"
#include "dimred/matrix.hpp"

namespace dimred::nsrobin {

using geometry::CurveProfile;
using numkernel::BandedMatrix;
using numkernel::ComplexMatrix;

/// Robin layer with complex coupling alpha(s) = a0 + i b0 cos(s) after the
/// removal of the boundary condition: the transformed form lives on
/// s periodic x t in (-1, 1) with natural ends and the weight
/// w_eps = exp(-2 eps t Re alpha) (1 - eps t kappa).
struct ComplexRobinModel {
    CurveProfile profile;
    double a0 = 1.0;
    double b0 = 0.5;
    double eps = 0.05;
    index_t ns = 48;
    index_t nt = 32; // number of t-cells; nodes = nt + 1

    cplx alpha(double s) const { return {a0, b0 * std::cos(s)}; }
    cplx alpha_prime(double s) const { return {0.0, -b0 * std::sin(s)}; }
    double im_alpha(double s) const { return b0 * std::cos(s); }
    double sup_abs_alpha() const { return std::hypot(a0, b0); }

    /// largest eps keeping both the tubular bound and the weight bounds
    double eps_max() const {
        const double km = profile.max_abs_kappa();
        const double tub = km > 0.0 ? 0.5 / km : 1e300;
        return std::min(tub, 0.5 / (1.0 + std::abs(a0)));
    }

    double weight(double s, double t) const {
        return std::exp(-2.0 * eps * t * a0) * (1.0 - eps * t * profile.kappa(s));
    }
    cplx effective_potential(double s) const {
        const cplx al = alpha(s);
        return std::norm(al) - 2.0 * al * a0 - al * profile.kappa(s);
    }
    cplx v_eps(double s, double t) const {
        const cplx al = alpha(s);
        const double kap = profile.kappa(s);
        return std::norm(al) - 2.0 * al * a0 - al * kap / (1.0 - eps * t * kap);
    }
};

/// Discretized transformed form (complex, non-Hermitian for b0 != 0) and
/// the comparison/effective pencils on the plain measure.
struct TransformedPencil {
    index_t ns, nt; // nt = cells, nodes per fiber = nt + 1
    double eps;
    BandedMatrix<cplx> a;      // Q_eps, s-fast ordering, band ns
    std::vector<double> mass;  // w_eps quadrature (real positive)
};

struct HatPencil {
    BandedMatrix<cplx> a;      // Q_hat: plain stiffness + V_eff mass
    std::vector<double> mass;  // plain quadrature
};

TransformedPencil assemble_transformed(const ComplexRobinModel& model);

/// Q_hat and the 1-D effective pencil (A_eff, h_s I). A_eff is assembled
/// through the shared periodic 1-D pencil so cross-model identities hold.
struct HatAndEffective {
    HatPencil hat;
    ComplexMatrix a_eff;
    double m_eff; // uniform mass h_s
};
HatAndEffective assemble_hat_and_effective(const ComplexRobinModel& model);

/// Weighted-norm distance between the full resolvent and the extended
/// effective resolvent at z, Richardson-extrapolated over a grid doubling.
/// Throws window_error when z is too close to either spectrum
/// (smallest singular value below 1e-8).
double resolvent_difference_norm(const ComplexRobinModel& model, cplx z, double power_tol = 1e-9);

/// Raw single-grid value (used by the extrapolation and by tests).
double resolvent_difference_norm_raw(const ComplexRobinModel& model, cplx z, double power_tol = 1e-9);

struct ResolventDiffRecord {
    double norm = 0.0;      // Richardson-extrapolated weighted norm
    double smin_full = 0.0; // smallest singular value of the shifted full pencil
    double smin_eff = 0.0;  // same for the effective pencil
};

/// Extrapolated norm together with the resolvent-set certificates measured
/// on the base grid.
ResolventDiffRecord resolvent_difference_record(const ComplexRobinModel& model, cplx z,
                                                double power_tol = 1e-9);

struct AccretivityRecord {
    double c0_estimate = 0.0;
    bool holds = false;
};

/// Smallest eigenvalue of the Hermitian pencil
/// (Herm(A_eps) + M * M_eps, K_s + eps^{-2} K_t + M_eps).
AccretivityRecord accretivity_check(const ComplexRobinModel& model, double shift);

struct ConjugationReport {
    double max_entry_deviation = 0.0; // |A(conj alpha) - conj(A(alpha))|
    cplx eig_alpha{};                 // refined eigenvalue near z0
    cplx eig_conj{};                  // refined eigenvalue of the conjugate model near conj(z0)
    double pair_deviation = 0.0;      // |eig_conj - conj(eig_alpha)|
};

/// Entrywise conjugation symmetry of the assembly plus the eigenvalue-pair
/// corollary checked by shift-invert refinement near z0.
ConjugationReport conjugation_symmetry_check(const ComplexRobinModel& model, cplx z0);

/// Entrywise-only variant (no eigenvalue refinement).
double conjugation_entry_deviation(const ComplexRobinModel& model);

struct VariationalGapFit {
    std::vector<double> max_ratios; // per eps
    double slope = 0.0;
    double sampling_spread = 0.0;   // relative change when trials double
};

/// Sampled variational estimate: max over band-limited random pairs of
/// |Q_eps(phi, psi) - Q_hat(phi, psi)| over the product of graph norms,
/// fitted against eps.
VariationalGapFit variational_gap_check(const ComplexRobinModel& base,
                                        const std::vector<double>& eps_list, int trials);

} // namespace dimred::nsrobin
