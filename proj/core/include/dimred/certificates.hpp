#pragma once

#include <functional>

#include "dimred/types.hpp"

namespace dimred::certificates {

/// Abstract constants of a reduction: spectral gap gamma, commutator norm
/// nu = ||[S, Pi]||, and the derived coupling measure a = nu / sqrt(gamma).
struct ReductionData {
    double gamma;
    double commutator_norm;
    double a;

    static ReductionData from_gap_and_commutator(double gamma, double nu);
    void validate() const;
};

/// The four z-dependent coefficients entering the resolvent certificates.
/// Only |z| enters; all coefficients vanish when a = 0.
struct EtaCoefficients {
    cplx z;
    double eta1, eta2, eta3, eta4;
};

EtaCoefficients eta_at(const ReductionData& data, cplx z);

/// Certificate hypothesis: 1 - eta1 * R_hat - eta2 > 0.
bool gate(const EtaCoefficients& eta, double hat_resolvent_norm);

double gate_margin(const EtaCoefficients& eta, double hat_resolvent_norm);

/// Certified bound on the full resolvent norm,
/// ((eta3 + 1) R_hat + eta4) / (1 - eta1 R_hat - eta2).
/// Throws gate_error when the hypothesis fails.
double certify_resolvent_bound(const EtaCoefficients& eta, double hat_resolvent_norm);

/// Certified bound on the resolvent difference,
/// eta1 R R_hat + eta2 R + eta3 R_hat + eta4.
double certify_difference_bound(const EtaCoefficients& eta, double resolvent_norm,
                                double hat_resolvent_norm);

/// 1 / dist(z, [gamma, +inf)), the comparison between the decoupled and the
/// effective resolvent. Throws window_error when z lies on the half-line.
double effective_vs_hat_bound(double gamma, cplx z);

struct Lemma17Bounds {
    double inverse_bound;
    std::function<double(double)> difference_bound; // of the measured ||A^{-1}||
};

/// Abstract inverse bounds from the variational estimate with coefficients
/// eta1..eta4 and a known ||Ahat^{-1}||. Throws gate_error when the
/// hypothesis 1 - eta1 * inv_norm_hat - eta2 > 0 fails.
Lemma17Bounds lemma17_bounds(double eta1, double eta2, double eta3, double eta4,
                             double inv_norm_hat);

} // namespace dimred::certificates
