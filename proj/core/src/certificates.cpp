#include "dimred/certificates.hpp"

#include <cmath>

namespace dimred::certificates {

ReductionData ReductionData::from_gap_and_commutator(double gamma, double nu) {
    ReductionData d{gamma, nu, nu / std::sqrt(gamma)};
    d.validate();
    return d;
}

void ReductionData::validate() const {
    if (!(gamma > 0.0)) throw numerical_error("ReductionData: gamma must be positive");
    if (!(commutator_norm >= 0.0)) throw numerical_error("ReductionData: nu must be nonnegative");
    if (std::abs(a * std::sqrt(gamma) - commutator_norm) >
        1e-12 * std::max(1.0, commutator_norm))
        throw numerical_error("ReductionData: a * sqrt(gamma) != nu");
}

EtaCoefficients eta_at(const ReductionData& data, cplx z) {
    data.validate();
    const double a = data.a;
    const double g = data.gamma;
    const double r = std::abs(z);
    const double s2 = std::sqrt(2.0);
    const double tail = 3.0 * a / (g * s2) * (2.0 + a / s2); // shared |z|-coefficient
    EtaCoefficients e;
    e.z = z;
    e.eta1 = 3.0 / s2 * a * a * g + 6.0 * a / s2 * (1.0 + a) * r + tail * r * r;
    e.eta2 = 3.0 * a / s2 * (1.0 + a) + tail * r;
    e.eta3 = 3.0 * a / s2 * (1.0 + a / s2) + tail * r;
    e.eta4 = tail;
    return e;
}

double gate_margin(const EtaCoefficients& eta, double hat_resolvent_norm) {
    return 1.0 - eta.eta1 * hat_resolvent_norm - eta.eta2;
}

bool gate(const EtaCoefficients& eta, double hat_resolvent_norm) {
    if (!(hat_resolvent_norm >= 0.0)) throw numerical_error("gate: R_hat must be nonnegative");
    return gate_margin(eta, hat_resolvent_norm) > 0.0;
}

double certify_resolvent_bound(const EtaCoefficients& eta, double hat_resolvent_norm) {
    const double denom = gate_margin(eta, hat_resolvent_norm);
    if (!(denom > 0.0)) throw gate_error("certify_resolvent_bound: gate failed");
    return ((eta.eta3 + 1.0) * hat_resolvent_norm + eta.eta4) / denom;
}

double certify_difference_bound(const EtaCoefficients& eta, double resolvent_norm,
                                double hat_resolvent_norm) {
    if (!(resolvent_norm >= 0.0) || !(hat_resolvent_norm >= 0.0))
        throw numerical_error("certify_difference_bound: norms must be nonnegative");
    return eta.eta1 * resolvent_norm * hat_resolvent_norm + eta.eta2 * resolvent_norm +
           eta.eta3 * hat_resolvent_norm + eta.eta4;
}

double effective_vs_hat_bound(double gamma, cplx z) {
    if (!(gamma > 0.0)) throw numerical_error("effective_vs_hat_bound: gamma must be positive");
    // exact distance to the half-line [gamma, +inf)
    double dist;
    if (z.real() < gamma)
        dist = std::abs(z - cplx(gamma, 0.0));
    else
        dist = std::abs(z.imag());
    if (dist <= 0.0) throw window_error("effective_vs_hat_bound: z lies on [gamma, +inf)");
    return 1.0 / dist;
}

Lemma17Bounds lemma17_bounds(double eta1, double eta2, double eta3, double eta4,
                             double inv_norm_hat) {
    const double denom = 1.0 - eta1 * inv_norm_hat - eta2;
    if (!(denom > 0.0)) throw gate_error("lemma17_bounds: hypothesis violated");
    Lemma17Bounds b;
    b.inverse_bound = ((eta3 + 1.0) * inv_norm_hat + eta4) / denom;
    b.difference_bound = [=](double inv_norm) {
        return eta1 * inv_norm * inv_norm_hat + eta2 * inv_norm + eta3 * inv_norm_hat + eta4;
    };
    return b;
}

} // namespace dimred::certificates
