#include <doctest.h>

#include <cmath>

#include "dimred/certificates.hpp"

using namespace dimred;
using namespace dimred::certificates;

TEST_CASE("eta_at closed forms") {
    // a = 0 annihilates every coefficient
    {
        ReductionData d = ReductionData::from_gap_and_commutator(3.7, 0.0);
        EtaCoefficients e = eta_at(d, cplx{5.0, -2.0});
        CHECK(e.eta1 == 0.0);
        CHECK(e.eta2 == 0.0);
        CHECK(e.eta3 == 0.0);
        CHECK(e.eta4 == 0.0);
    }
    // a = 1, gamma = 1, z = 0 (independently evaluated)
    {
        ReductionData d = ReductionData::from_gap_and_commutator(1.0, 1.0);
        EtaCoefficients e = eta_at(d, cplx{0.0, 0.0});
        CHECK(e.eta1 == doctest::Approx(2.1213203435596424).epsilon(1e-12));
        CHECK(e.eta2 == doctest::Approx(4.2426406871192850).epsilon(1e-12));
        CHECK(e.eta3 == doctest::Approx(3.6213203435596424).epsilon(1e-12));
        CHECK(e.eta4 == doctest::Approx(5.7426406871192850).epsilon(1e-12));
    }
    // a = 0.1, gamma = 100, z = 10
    {
        ReductionData d = ReductionData::from_gap_and_commutator(100.0, 0.1 * 10.0);
        CHECK(d.a == doctest::Approx(0.1).epsilon(1e-14));
        EtaCoefficients e = eta_at(d, cplx{10.0, 0.0});
        CHECK(e.eta1 == doctest::Approx(7.227489168102785).epsilon(1e-12));
    }
}

TEST_CASE("gate examples") {
    EtaCoefficients zero{cplx{0, 0}, 0, 0, 0, 0};
    CHECK(gate(zero, 1e6));

    EtaCoefficients e1{cplx{0, 0}, 1.0, 0.0, 0.0, 0.0};
    CHECK(!gate(e1, 2.0));

    EtaCoefficients e2{cplx{0, 0}, 0.1, 0.5, 0.0, 0.0};
    CHECK(gate(e2, 1.0));
    CHECK(gate_margin(e2, 1.0) == doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("certify_resolvent_bound examples") {
    EtaCoefficients zero{cplx{0, 0}, 0, 0, 0, 0};
    CHECK(certify_resolvent_bound(zero, 5.0) == doctest::Approx(5.0));

    EtaCoefficients e{cplx{0, 0}, 0.1, 0.1, 0.1, 0.1};
    CHECK(certify_resolvent_bound(e, 1.0) == doctest::Approx(1.5).epsilon(1e-14));

    EtaCoefficients bad{cplx{0, 0}, 1.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(certify_resolvent_bound(bad, 2.0), gate_error);
}

TEST_CASE("certify_difference_bound examples") {
    EtaCoefficients zero{cplx{0, 0}, 0, 0, 0, 0};
    CHECK(certify_difference_bound(zero, 9.0, 11.0) == doctest::Approx(0.0));

    EtaCoefficients ones{cplx{0, 0}, 1, 1, 1, 1};
    CHECK(certify_difference_bound(ones, 1.0, 1.0) == doctest::Approx(4.0));

    EtaCoefficients e{cplx{0, 0}, 2, 0, 0, 0};
    CHECK(certify_difference_bound(e, 3.0, 0.5) == doctest::Approx(3.0));
}

TEST_CASE("effective_vs_hat_bound half-line distance") {
    CHECK(effective_vs_hat_bound(2.0, cplx{0.0, 0.0}) == doctest::Approx(0.5));
    CHECK(effective_vs_hat_bound(1.0, cplx{1.0, 1.0}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(effective_vs_hat_bound(1.0, cplx{3.0, 0.0}), window_error);
}

TEST_CASE("lemma17_bounds examples") {
    {
        Lemma17Bounds b = lemma17_bounds(0, 0, 0, 0, 7.5);
        CHECK(b.inverse_bound == doctest::Approx(7.5));
        CHECK(b.difference_bound(3.0) == doctest::Approx(0.0));
    }
    {
        Lemma17Bounds b = lemma17_bounds(0, 0, 1, 0, 2.0);
        CHECK(b.inverse_bound == doctest::Approx(4.0));
    }
    CHECK_THROWS_AS(lemma17_bounds(0.4, 0.3, 0, 0, 2.0), gate_error);
}

TEST_CASE("monotonicity of eta in |z| and in a") {
    for (double gamma : {0.5, 1.0, 10.0}) {
        double prev1 = -1, prev2 = -1, prev3 = -1, prev4 = -1;
        for (double r : {0.0, 0.5, 1.0, 2.0, 5.0, 20.0}) {
            ReductionData d = ReductionData::from_gap_and_commutator(gamma, 0.7 * std::sqrt(gamma));
            EtaCoefficients e = eta_at(d, cplx{r, 0.0});
            CHECK(e.eta1 >= prev1);
            CHECK(e.eta2 >= prev2);
            CHECK(e.eta3 >= prev3);
            CHECK(e.eta4 >= prev4);
            prev1 = e.eta1; prev2 = e.eta2; prev3 = e.eta3; prev4 = e.eta4;
        }
        double peta1 = -1, peta2 = -1, peta3 = -1, peta4 = -1;
        for (double a : {0.0, 0.1, 0.5, 1.0, 3.0}) {
            ReductionData d = ReductionData::from_gap_and_commutator(gamma, a * std::sqrt(gamma));
            EtaCoefficients e = eta_at(d, cplx{1.0, 1.0});
            CHECK(e.eta1 >= peta1);
            CHECK(e.eta2 >= peta2);
            CHECK(e.eta3 >= peta3);
            CHECK(e.eta4 >= peta4);
            peta1 = e.eta1; peta2 = e.eta2; peta3 = e.eta3; peta4 = e.eta4;
        }
    }
}

TEST_CASE("certified bound is nonincreasing as eta coefficients decrease") {
    const double rhat = 2.0;
    double prev = 1e300;
    for (double s : {1.0, 0.5, 0.25, 0.1, 0.0}) {
        EtaCoefficients e{cplx{0, 0}, 0.1 * s, 0.2 * s, 0.3 * s, 0.4 * s};
        const double bound = certify_resolvent_bound(e, rhat);
        CHECK(bound <= prev + 1e-14);
        prev = bound;
    }
    CHECK(prev == doctest::Approx(rhat));
}

TEST_CASE("theorem-level bounds coincide with the abstract lemma") {
    // for any (data, z, R_hat) the abstract bounds reproduce the certified ones
    for (double gamma : {0.5, 2.0}) {
        for (double a : {0.05, 0.2}) {
            ReductionData d = ReductionData::from_gap_and_commutator(gamma, a * std::sqrt(gamma));
            for (double re : {-1.0, 0.3}) {
                for (double im : {0.0, 0.7}) {
                    const cplx z{re, im};
                    EtaCoefficients e = eta_at(d, z);
                    const double rhat = 1.3;
                    if (!gate(e, rhat)) continue;
                    Lemma17Bounds lb = lemma17_bounds(e.eta1, e.eta2, e.eta3, e.eta4, rhat);
                    CHECK(lb.inverse_bound == certify_resolvent_bound(e, rhat));
                    CHECK(lb.difference_bound(2.2) == certify_difference_bound(e, 2.2, rhat));
                }
            }
        }
    }
}
