#include <doctest.h>

#include <cmath>

#include "dimred/robin_shell.hpp"

using namespace dimred;
using namespace dimred::shell;

TEST_CASE("robin fiber: transcendental closed form at kappa = 0") {
    // alpha = k coth k with k = 2 gives mu_1 = -4 (ansatz sinh(k(1-t)))
    CurveProfile flat(0.0, 0.0);
    const double alpha = 2.0 / std::tanh(2.0);
    CHECK(alpha == doctest::Approx(2.0746294414550963).epsilon(1e-14));
    const double mu = transverse_eig_robin(flat, 0.3, alpha, 1);
    CHECK(std::abs(mu + 4.0) <= 1e-8);
}

TEST_CASE("robin fiber: large-coupling expansion of mu_1 and gap of mu_2") {
    CurveProfile p(0.5, 0.3);
    const double s = 0.7;
    double prev = -1e300;
    for (double alpha : {10.0, 20.0, 40.0, 80.0}) {
        const index_t nt = static_cast<index_t>(5 * alpha);
        const double m1 = transverse_eig_robin(p, s, alpha, 1, nt);
        const double m2 = transverse_eigs_robin_raw(p, s, alpha, 2, nt)[1];
        const double shifted = m1 + alpha * alpha + alpha * p.kappa(s);
        CHECK(std::abs(shifted) <= 1.0); // bounded remainder
        CHECK(m2 >= 1.0);                // mu_2 stays away from 0
        (void)prev;
        prev = shifted;
    }
}

TEST_CASE("fiber ordering mu_1 < mu_2 across the sweep") {
    CurveProfile p(0.5, 0.3);
    for (double alpha : {10.0, 40.0}) {
        for (double s : {0.0, 1.0, 2.5, 5.0}) {
            auto eigs = transverse_eigs_robin_raw(p, s, alpha, 2, static_cast<index_t>(5 * alpha));
            CHECK(eigs[0] < eigs[1]);
        }
    }
}

TEST_CASE("effective_eigs examples") {
    // delta = 0: nu_j = m^2 - alpha kappa0
    CurveProfile c(0.5, 0.0);
    auto nu = effective_eigs(c, 7.0, 3);
    CHECK(nu[0] == doctest::Approx(-3.5).epsilon(1e-8));
    CHECK(nu[1] == doctest::Approx(-2.5).epsilon(1e-7));
    CHECK(nu[2] == doctest::Approx(-2.5).epsilon(1e-7));

    // alpha = 0: circle Laplacian
    CurveProfile p(0.5, 0.3);
    auto nu0 = effective_eigs(p, 0.0, 4);
    CHECK(std::abs(nu0[0]) <= 1e-8);
    CHECK(nu0[1] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(nu0[2] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(nu0[3] == doctest::Approx(4.0).epsilon(1e-5));
}

TEST_CASE("harmonic approximation of the effective eigenvalues") {
    CurveProfile p(0.5, 0.3);
    auto fit = harmonic_fit(p, {50.0, 100.0, 200.0, 400.0}, 1);
    CHECK(!fit.degenerate);
    CHECK(fit.target == doctest::Approx(std::sqrt(0.15)).epsilon(1e-12));
    // scaled value approaches the harmonic level; 10% at alpha = 400
    CHECK(std::abs(fit.scaled.back() - fit.target) <= 0.1 * fit.target);
    // deviation decays at least like the stated remainder order
    CHECK(fit.deviation_slope <= -0.2);

    CurveProfile flatmax(0.5, 0.0);
    auto bad = harmonic_fit(flatmax, {50.0, 100.0, 200.0, 400.0}, 1);
    CHECK(bad.degenerate);
}

TEST_CASE("assemble_full: weight positivity is enforced") {
    CurveProfile steep(1.0, 0.3); // kappa_max = 1.3 -> w_1 hits zero inside
    ShellModel m{steep, 10.0, 16, 64};
    CHECK_THROWS_AS(assemble_full(m), numerical_error);
}

TEST_CASE("kappa = 0: shell separates into fiber plus circle modes") {
    CurveProfile flat(0.0, 0.0);
    const double alpha = 2.0 / std::tanh(2.0);
    ShellModel m{flat, alpha, 16, 64};
    auto lam = shell_eigs_raw(m, 1);
    auto mu = transverse_eigs_robin_raw(flat, 0.0, alpha, 1, 64);
    CHECK(std::abs(lam[0] - mu[0]) <= 1e-9 * std::abs(mu[0]));
}

TEST_CASE("pencil eigenvalues are real and ordered") {
    CurveProfile p(0.5, 0.3);
    ShellModel m{p, 10.0, 24, 80};
    auto lam = shell_eigs_raw(m, 2);
    CHECK(lam[0] < lam[1]);
    CHECK(std::isfinite(lam[0]));
    CHECK(std::isfinite(lam[1]));
}

TEST_CASE("shifted eigenvalue residual stays bounded over the alpha sweep") {
    CurveProfile p(0.5, 0.3);
    for (index_t j = 1; j <= 2; ++j) {
        double max_small = 0.0, at80 = 0.0;
        for (double alpha : {10.0, 20.0, 40.0, 80.0}) {
            ShellModel m{p, alpha, 48, 0};
            auto e = shell_eigs(m, j);
            auto nu = effective_eigs(p, alpha, j);
            const double res = std::abs(e.values.back() + alpha * alpha - nu.back());
            if (alpha < 80.0)
                max_small = std::max(max_small, res);
            else
                at80 = res;
        }
        CHECK(at80 <= 1.5 * max_small);
    }
}

TEST_CASE("large-alpha separation of the bottom fiber eigenvalue") {
    CurveProfile p(0.5, 0.3);
    const double alpha = 80.0;
    const double mu = transverse_eig_robin(p, p.argmax(), alpha, 1, 400);
    CHECK((mu + alpha * alpha) / alpha == doctest::Approx(-p.kappa_max()).epsilon(0.05));
}

TEST_CASE("resolvent_window_check: commutator scaling and certified bound") {
    CurveProfile p(0.5, 0.3);
    for (double alpha : {20.0, 40.0}) {
        ShellModel m{p, alpha, 32, 0};
        const double mu = transverse_eig_robin(p, 0.0, alpha, 1, static_cast<index_t>(5 * alpha));
        auto rec = resolvent_window_check(m, mu - 3.0, 0.5, 1.5);
        CHECK(rec.a * alpha * alpha <= 8.0);  // a = O(alpha^{-2})
        CHECK(rec.gate);
        CHECK(rec.certified_diff * alpha <= 10.0); // certified O(1/alpha) difference
    }
}

TEST_CASE("resolvent_window_check: window violations") {
    CurveProfile p(0.5, 0.3);
    ShellModel m{p, 20.0, 24, 0};
    const double mu = transverse_eig_robin(p, 0.0, 20.0, 1, 100);
    // z on the effective spectrum violates the distance condition
    CHECK_THROWS_AS(resolvent_window_check(m, mu + 1.0, 0.5, 4.0), window_error);
    // z outside the window
    CHECK_THROWS_AS(resolvent_window_check(m, mu - 100.0, 0.5, 1.5), window_error);
}
