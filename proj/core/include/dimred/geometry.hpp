#pragma once

#include <optional>
#include <vector>

#include "dimred/types.hpp"

namespace dimred::geometry {

/// Intrinsic geometry of a smooth closed plane curve given by its periodic
/// curvature profile. The canonical family is kappa(s) = kappa0 + delta*cos(s)
/// on [0, 2*pi); arbitrary sampled profiles go through a periodic cubic
/// spline behind the same interface.
class CurveProfile {
  public:
    /// Cosine family kappa0 + delta * cos(2*pi*s/period).
    CurveProfile(double kappa0, double delta, double period = 2.0 * M_PI);

    /// Sampled profile at uniform s-points over [0, period).
    static CurveProfile from_samples(const std::vector<double>& samples, double period = 2.0 * M_PI);

    double period() const { return period_; }
    double kappa(double s) const;
    double kappa_prime(double s) const;

    double max_abs_kappa() const { return max_abs_; }
    double kappa_max() const { return kappa_max_; }
    double argmax() const { return argmax_; }
    /// -kappa''(s*) at the maximum; equals delta for the cosine family.
    double hess_at_max() const { return hess_at_max_; }

    bool is_cosine_family() const { return spline_m_.empty(); }
    double cosine_kappa0() const { return kappa0_; }
    double cosine_delta() const { return delta_; }

    /// Unique nondegenerate maximum (needed for the harmonic expansions).
    bool has_unique_nondegenerate_max() const;

    /// Closed-curve realizability: integral of kappa equals 2*pi * winding,
    /// with a nonzero integer winding number.
    void check_closed() const;

  private:
    double period_;
    double kappa0_ = 0.0, delta_ = 0.0;
    // periodic cubic spline data (empty for the cosine family)
    std::vector<double> samples_, spline_m_;
    double max_abs_ = 0.0, kappa_max_ = 0.0, argmax_ = 0.0, hess_at_max_ = 0.0;
};

/// Layer weight 1 - eps*t*kappa(s) (single principal curvature, d = 2).
/// Requires eps*|t|*max|kappa| < 1.
double weight(const CurveProfile& profile, double eps, double s, double t);

/// Metric factor (1 - eps*t*kappa(s))^{-2}; same precondition.
double metric_factor(const CurveProfile& profile, double eps, double s, double t);

/// Local tubular condition eps * max|kappa| < 1 (strict).
bool tubular_ok(const CurveProfile& profile, double eps);

} // namespace dimred::geometry
