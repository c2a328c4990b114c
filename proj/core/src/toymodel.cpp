#include "dimred/toymodel.hpp"

#include <algorithm>
#include <cmath>

#include "dimred/jacobi.hpp"
#include "dimred/lu.hpp"

namespace dimred::toymodel {

using numkernel::ComplexMatrix;
using numkernel::complexify;
using numkernel::hermitian_eigs;
using numkernel::jacobi_dense_sym;
using numkernel::lu_inverse;

namespace {

RealMatrix project(const RealMatrix& a, const std::vector<int>& mask_row,
                   const std::vector<int>& mask_col) {
    // returns M_row * A * M_col for 0/1 diagonal masks
    const index_t d = a.rows();
    RealMatrix r(d, d);
    for (index_t i = 0; i < d; ++i) {
        if (!mask_row[static_cast<size_t>(i)]) continue;
        for (index_t j = 0; j < d; ++j)
            if (mask_col[static_cast<size_t>(j)]) r(i, j) = a(i, j);
    }
    return r;
}

} // namespace

ToyInstance build(index_t n, index_t m, const std::vector<double>& tau,
                  const std::vector<double>& gamma_s, const RealMatrix& S) {
    if (n < 1 || m < 1) throw numerical_error("toymodel: n, m >= 1 required");
    const index_t d = n * m;
    if (static_cast<index_t>(tau.size()) != d || static_cast<index_t>(gamma_s.size()) != n ||
        S.rows() != d || S.cols() != d)
        throw numerical_error("toymodel: inconsistent dimensions");

    ToyInstance inst;
    inst.n = n;
    inst.m = m;
    inst.tau = tau;
    inst.gamma_s = gamma_s;
    inst.S = S;

    double gamma = gamma_s[0];
    for (double g : gamma_s) gamma = std::min(gamma, g);
    if (!(gamma > 0.0)) throw numerical_error("toymodel: gamma <= 0");

    inst.pi_diag.assign(static_cast<size_t>(d), 0);
    for (index_t s = 0; s < n; ++s)
        for (index_t i = 0; i < m; ++i) {
            const double t = tau[static_cast<size_t>(s * m + i)];
            if (!(t >= 0.0)) throw numerical_error("toymodel: tau must be nonnegative");
            if (std::abs(t - gamma_s[static_cast<size_t>(s)]) < 1e-9)
                throw numerical_error("toymodel: tau within exclusion zone of gamma_s");
            if (t < gamma_s[static_cast<size_t>(s)]) inst.pi_diag[static_cast<size_t>(s * m + i)] = 1;
        }

    std::vector<int> perp(static_cast<size_t>(d));
    for (index_t i = 0; i < d; ++i) perp[static_cast<size_t>(i)] = 1 - inst.pi_diag[static_cast<size_t>(i)];

    inst.L = S.transpose() * S;
    for (index_t i = 0; i < d; ++i) inst.L(i, i) += tau[static_cast<size_t>(i)];

    inst.L_hat = project(inst.L, inst.pi_diag, inst.pi_diag) + project(inst.L, perp, perp);

    for (index_t i = 0; i < d; ++i)
        (inst.pi_diag[static_cast<size_t>(i)] ? inst.low_index : inst.high_index).push_back(i);

    const index_t nl = static_cast<index_t>(inst.low_index.size());
    const index_t nh = static_cast<index_t>(inst.high_index.size());
    inst.L_eff = RealMatrix(std::max<index_t>(nl, 1), std::max<index_t>(nl, 1));
    inst.L_perp = RealMatrix(std::max<index_t>(nh, 1), std::max<index_t>(nh, 1));
    for (index_t a = 0; a < nl; ++a)
        for (index_t b = 0; b < nl; ++b)
            inst.L_eff(a, b) = inst.L(inst.low_index[static_cast<size_t>(a)], inst.low_index[static_cast<size_t>(b)]);
    for (index_t a = 0; a < nh; ++a)
        for (index_t b = 0; b < nh; ++b)
            inst.L_perp(a, b) = inst.L(inst.high_index[static_cast<size_t>(a)], inst.high_index[static_cast<size_t>(b)]);

    // nu = ||S Pi - Pi S|| via the dense oracle on C^T C
    RealMatrix c(d, d);
    for (index_t i = 0; i < d; ++i)
        for (index_t j = 0; j < d; ++j)
            c(i, j) = S(i, j) * static_cast<double>(inst.pi_diag[static_cast<size_t>(j)]) -
                      static_cast<double>(inst.pi_diag[static_cast<size_t>(i)]) * S(i, j);
    std::vector<double> ctc_eigs = jacobi_dense_sym(c.transpose() * c);
    const double nu = std::sqrt(std::max(0.0, ctc_eigs.back()));
    inst.data = certificates::ReductionData::from_gap_and_commutator(gamma, nu);
    return inst;
}

ToyInstance random_instance(Rng& rng, index_t n_max, index_t m_max, double scale_max) {
    const index_t n = 1 + static_cast<index_t>(rng.integer(static_cast<std::uint64_t>(n_max)));
    const index_t m = 1 + static_cast<index_t>(rng.integer(static_cast<std::uint64_t>(m_max)));
    const index_t d = n * m;
    std::vector<double> gamma_s(static_cast<size_t>(n));
    for (double& g : gamma_s) g = rng.uniform(0.5, 2.0);
    std::vector<double> tau(static_cast<size_t>(d));
    for (index_t s = 0; s < n; ++s)
        for (index_t i = 0; i < m; ++i) {
            const double g = gamma_s[static_cast<size_t>(s)];
            // sample away from the exclusion band around gamma_s
            double t;
            if (rng.uniform01() < 0.5)
                t = rng.uniform(0.0, 0.95 * g);
            else
                t = rng.uniform(1.05 * g, 3.0 * g);
            tau[static_cast<size_t>(s * m + i)] = t;
        }
    const double scale = rng.uniform(0.0, scale_max);
    RealMatrix S(d, d);
    for (index_t i = 0; i < d; ++i)
        for (index_t j = 0; j < d; ++j) S(i, j) = scale * rng.uniform(-1.0, 1.0);
    return build(n, m, tau, gamma_s, S);
}

double form_q(const ToyInstance& inst, const std::vector<double>& phi, const std::vector<double>& psi) {
    const std::vector<double> sphi = inst.S.apply(phi);
    const std::vector<double> spsi = inst.S.apply(psi);
    double q = 0.0;
    for (size_t i = 0; i < sphi.size(); ++i) q += sphi[i] * spsi[i];
    for (size_t i = 0; i < phi.size(); ++i) q += phi[i] * inst.tau[i] * psi[i];
    return q;
}

double form_q_hat(const ToyInstance& inst, const std::vector<double>& phi, const std::vector<double>& psi) {
    const size_t d = phi.size();
    std::vector<double> pl(d, 0.0), ph(d, 0.0), ql(d, 0.0), qh(d, 0.0);
    for (size_t i = 0; i < d; ++i) {
        if (inst.pi_diag[i]) { pl[i] = phi[i]; ql[i] = psi[i]; }
        else                 { ph[i] = phi[i]; qh[i] = psi[i]; }
    }
    return form_q(inst, pl, ql) + form_q(inst, ph, qh);
}

PairCheck check_prop26(const ToyInstance& inst, const std::vector<double>& phi,
                       const std::vector<double>& psi) {
    using numkernel::norm2;
    const double gamma = inst.data.gamma;
    const double a = inst.data.a;
    const double s2 = std::sqrt(2.0);

    PairCheck r;
    r.lhs = std::abs(form_q(inst, phi, psi) - form_q_hat(inst, phi, psi)) / gamma;

    const double nphi = norm2(phi), npsi = norm2(psi);
    const double nlphi = norm2(inst.L.apply(phi));
    const double nlhpsi = norm2(inst.L_hat.apply(psi));
    r.rhs = 3.0 * a / s2 * (nphi + nlphi / gamma) * (nlhpsi / gamma) +
            3.0 * a / s2 * (a * nphi + (1.0 + a / s2) * nlphi / gamma) * (npsi + nlhpsi / gamma);
    r.holds = r.lhs <= r.rhs * (1.0 + 1e-9) + 1e-14;
    return r;
}

PairCheck check_theorem25(const ToyInstance& inst, cplx z, const std::vector<double>& phi,
                          const std::vector<double>& psi) {
    using numkernel::norm2;
    PairCheck r;
    r.lhs = std::abs(form_q(inst, phi, psi) - form_q_hat(inst, phi, psi));

    const certificates::EtaCoefficients e = certificates::eta_at(inst.data, z);
    const std::vector<double> lphi = inst.L.apply(phi);
    const std::vector<double> lhpsi = inst.L_hat.apply(psi);
    // ||(L - z) phi|| and ||(L_hat - conj(z)) psi|| for real phi, psi
    double nlz = 0.0, nlhz = 0.0;
    for (size_t i = 0; i < phi.size(); ++i) {
        nlz += std::norm(cplx(lphi[i], 0.0) - z * phi[i]);
        nlhz += std::norm(cplx(lhpsi[i], 0.0) - std::conj(z) * psi[i]);
    }
    nlz = std::sqrt(nlz);
    nlhz = std::sqrt(nlhz);

    const double nphi = norm2(phi), npsi = norm2(psi);
    r.rhs = e.eta1 * nphi * npsi + e.eta2 * nphi * nlhz + e.eta3 * nlz * npsi + e.eta4 * nlz * nlhz;
    r.holds = r.lhs <= r.rhs * (1.0 + 1e-9) + 1e-14;
    return r;
}

CertificateCheck check_theorem11(const ToyInstance& inst, cplx z) {
    const index_t d = inst.dim();
    CertificateCheck out;

    const std::vector<double> hat_spec = jacobi_dense_sym(inst.L_hat);
    double hat_dist = 1e300;
    for (double lam : hat_spec) hat_dist = std::min(hat_dist, std::abs(cplx(lam, 0.0) - z));
    if (hat_dist < 1e-10) throw window_error("check_theorem11: z in the spectrum of L_hat");
    out.hat_norm = 1.0 / hat_dist; // L_hat is symmetric, hence normal

    const certificates::EtaCoefficients eta = certificates::eta_at(inst.data, z);
    out.gate = certificates::gate(eta, out.hat_norm);

    const std::vector<double> spec = jacobi_dense_sym(inst.L);
    double dist = 1e300;
    for (double lam : spec) dist = std::min(dist, std::abs(cplx(lam, 0.0) - z));
    out.z_in_rho_L = dist > 1e-12;
    out.exact_inv = out.z_in_rho_L ? 1.0 / dist : 1e300;

    if (out.z_in_rho_L) {
        ComplexMatrix rz = complexify(inst.L);
        ComplexMatrix rhz = complexify(inst.L_hat);
        for (index_t i = 0; i < d; ++i) {
            rz(i, i) -= z;
            rhz(i, i) -= z;
        }
        ComplexMatrix diff = lu_inverse(rz) - lu_inverse(rhz);
        std::vector<double> sv = hermitian_eigs(diff.adjoint() * diff);
        out.exact_diff = std::sqrt(std::max(0.0, sv.back()));
    } else {
        out.exact_diff = 1e300;
    }

    if (out.gate) {
        out.certified_inv = certificates::certify_resolvent_bound(eta, out.hat_norm);
        out.certified_diff = certificates::certify_difference_bound(eta, out.certified_inv, out.hat_norm);
        const double slack = 1.0 + 1e-9;
        out.sound = out.z_in_rho_L && out.exact_inv <= out.certified_inv * slack + 1e-12 &&
                    out.exact_diff <= out.certified_diff * slack + 1e-12;
    } else {
        out.sound = true; // nothing asserted when the gate fails
    }
    return out;
}

} // namespace dimred::toymodel
