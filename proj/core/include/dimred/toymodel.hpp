#pragma once

#include <vector>

#include "dimred/certificates.hpp"
#include "dimred/matrix.hpp"
#include "dimred/rng.hpp"

namespace dimred::toymodel {

using numkernel::RealMatrix;

/// Exact finite-dimensional realization of the reduction setting: n sites
/// with m-dimensional fibers, diagonal transverse operator tau, site
/// thresholds gamma_s, and a longitudinal operator S. Everything derived
/// (projections, decoupled operator, blocks, constants) is stored densely.
struct ToyInstance {
    index_t n = 0, m = 0;
    std::vector<double> tau;      // n*m transverse eigenvalues, fiber-major
    std::vector<double> gamma_s;  // n thresholds
    RealMatrix S;

    std::vector<int> pi_diag;     // 0/1 diagonal of the spectral projection
    RealMatrix L, L_hat, L_eff, L_perp;
    std::vector<index_t> low_index, high_index; // positions of ran(Pi), ran(Pi_perp)
    certificates::ReductionData data{1.0, 0.0, 0.0};

    index_t dim() const { return n * m; }
};

/// Assemble the instance and its derived operators. Rejects inputs with
/// transverse eigenvalues within 1e-9 of their threshold and nonpositive
/// gaps. The commutator norm is computed by the dense Jacobi oracle.
ToyInstance build(index_t n, index_t m, const std::vector<double>& tau,
                  const std::vector<double>& gamma_s, const RealMatrix& S);

/// Seeded random instance: thresholds in [1/2, 2], transverse eigenvalues
/// straddling them, and S with iid uniform [-1,1] entries scaled to sweep
/// the coupling constant a through [0, ~5].
ToyInstance random_instance(Rng& rng, index_t n_max, index_t m_max, double scale_max);

struct PairCheck {
    double lhs = 0.0, rhs = 0.0;
    bool holds = false;
};

/// Form-difference inequality with exact operator norms on the given pair.
PairCheck check_prop26(const ToyInstance& inst, const std::vector<double>& phi,
                       const std::vector<double>& psi);

/// z-shifted form-difference inequality with the eta coefficients.
PairCheck check_theorem25(const ToyInstance& inst, cplx z, const std::vector<double>& phi,
                          const std::vector<double>& psi);

struct CertificateCheck {
    bool gate = false;
    double hat_norm = 0.0;        // exact ||(L_hat - z)^{-1}||
    double certified_inv = 0.0;
    double exact_inv = 0.0;
    double certified_diff = 0.0;
    double exact_diff = 0.0;
    bool z_in_rho_L = false;
    bool sound = false;
};

/// Gate + certified bounds against dense-oracle resolvent norms.
/// Throws window_error when z is (numerically) in the spectrum of L_hat.
CertificateCheck check_theorem11(const ToyInstance& inst, cplx z);

// form values used by the checks (exposed for tests)
double form_q(const ToyInstance& inst, const std::vector<double>& phi, const std::vector<double>& psi);
double form_q_hat(const ToyInstance& inst, const std::vector<double>& phi, const std::vector<double>& psi);

} // namespace dimred::toymodel
