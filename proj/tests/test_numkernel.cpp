#include <doctest.h>

#include <cmath>
#include <complex>

#include "dimred/banded.hpp"
#include "dimred/iterative.hpp"
#include "dimred/jacobi.hpp"
#include "dimred/lanczos.hpp"
#include "dimred/lu.hpp"
#include "dimred/rng.hpp"
#include "dimred/sparse.hpp"
#include "dimred/tridiag.hpp"

using namespace dimred;
using namespace dimred::numkernel;

namespace {

RealMatrix random_real(Rng& rng, index_t n, double scale = 1.0) {
    RealMatrix a(n, n);
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < n; ++j) a(i, j) = scale * rng.uniform(-1.0, 1.0);
    return a;
}

ComplexMatrix random_complex(Rng& rng, index_t n, double scale = 1.0) {
    ComplexMatrix a(n, n);
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < n; ++j)
            a(i, j) = scale * cplx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    return a;
}

// determinant sign via elimination with pivot-swap tracking (test oracle)
int det_sign(RealMatrix a) {
    const index_t n = a.rows();
    int sign = 1;
    for (index_t k = 0; k < n; ++k) {
        index_t p = k;
        for (index_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
        if (std::abs(a(p, k)) == 0.0) return 0;
        if (p != k) {
            for (index_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            sign = -sign;
        }
        if (a(k, k) < 0) sign = -sign;
        for (index_t i = k + 1; i < n; ++i) {
            const double m = a(i, k) / a(k, k);
            for (index_t j = k; j < n; ++j) a(i, j) -= m * a(k, j);
        }
    }
    return sign;
}

} // namespace

TEST_CASE("lu_solve examples") {
    {
        RealMatrix a = RealMatrix::identity(3);
        std::vector<double> x = lu_solve(a, {1.0, 2.0, 3.0});
        CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(x[1] == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(x[2] == doctest::Approx(3.0).epsilon(1e-14));
    }
    {
        RealMatrix a(2, 2);
        a(0, 0) = 2; a(0, 1) = 1; a(1, 0) = 1; a(1, 1) = 3;
        std::vector<double> x = lu_solve(a, {3.0, 4.0});
        CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-13));
    }
    {
        RealMatrix a(2, 2);
        a(0, 1) = 1; a(1, 0) = 1;
        std::vector<double> x = lu_solve(a, {5.0, 7.0});
        CHECK(x[0] == doctest::Approx(7.0));
        CHECK(x[1] == doctest::Approx(5.0));
    }
    {
        RealMatrix a(2, 2);
        a(0, 0) = 1; a(0, 1) = 1; a(1, 0) = 1; a(1, 1) = 1;
        CHECK_THROWS_AS(lu_solve(a, {1.0, 1.0}), singular_matrix_error);
    }
}

TEST_CASE("lu_solve residual on 100 random well-conditioned systems") {
    Rng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const index_t n = 2 + static_cast<index_t>(rng.integer(18));
        // diagonally dominated random matrix keeps the condition number modest
        RealMatrix a = random_real(rng, n);
        for (index_t i = 0; i < n; ++i) a(i, i) += 4.0 * static_cast<double>(n);
        std::vector<double> b(static_cast<size_t>(n));
        for (double& v : b) v = rng.uniform(-1.0, 1.0);
        std::vector<double> x = lu_solve(a, b);
        std::vector<double> r = a.apply(x);
        for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
        CHECK(norm2(r) <= 1e-10 * a.max_abs() * std::max(norm2(x), 1.0));
    }
}

TEST_CASE("sym_tridiag_eigs examples") {
    {
        SymTridiag t{{1.0, 2.0, 3.0}, {0.0, 0.0}};
        std::vector<double> e = sym_tridiag_eigs(t, 3);
        CHECK(e[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(e[1] == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(e[2] == doctest::Approx(3.0).epsilon(1e-12));
    }
    {
        const index_t n = 10;
        SymTridiag t{std::vector<double>(n, 2.0), std::vector<double>(n - 1, -1.0)};
        std::vector<double> e = sym_tridiag_eigs(t, 1);
        CHECK(e[0] == doctest::Approx(2.0 - 2.0 * std::cos(M_PI / 11.0)).epsilon(1e-12));
    }
}

TEST_CASE("sym_tridiag_eigs agrees with dense Jacobi on random tridiagonals") {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const index_t n = 2 + static_cast<index_t>(rng.integer(49));
        SymTridiag t;
        t.diag.resize(static_cast<size_t>(n));
        t.offdiag.resize(static_cast<size_t>(n - 1));
        for (double& v : t.diag) v = rng.uniform(-2.0, 2.0);
        for (double& v : t.offdiag) v = rng.uniform(-2.0, 2.0);

        RealMatrix a(n, n);
        for (index_t i = 0; i < n; ++i) a(i, i) = t.diag[static_cast<size_t>(i)];
        for (index_t i = 0; i + 1 < n; ++i) {
            a(i, i + 1) = t.offdiag[static_cast<size_t>(i)];
            a(i + 1, i) = t.offdiag[static_cast<size_t>(i)];
        }
        std::vector<double> sturm = sym_tridiag_eigs(t, n);
        std::vector<double> dense = jacobi_dense_sym(a);
        for (index_t i = 0; i < n; ++i)
            CHECK(std::abs(sturm[static_cast<size_t>(i)] - dense[static_cast<size_t>(i)]) <= 1e-10);
    }
}

TEST_CASE("jacobi_dense_sym examples") {
    {
        RealMatrix a(2, 2);
        a(0, 0) = 5; a(1, 1) = -1;
        std::vector<double> e = jacobi_dense_sym(a);
        CHECK(e[0] == doctest::Approx(-1.0));
        CHECK(e[1] == doctest::Approx(5.0));
    }
    {
        RealMatrix a(2, 2);
        a(0, 1) = 1; a(1, 0) = 1;
        std::vector<double> e = jacobi_dense_sym(a);
        CHECK(e[0] == doctest::Approx(-1.0));
        CHECK(e[1] == doctest::Approx(1.0));
    }
    {
        RealMatrix a(2, 2);
        a(0, 1) = 1.0; a(1, 0) = 1.5;
        CHECK_THROWS_AS(jacobi_dense_sym(a), numerical_error);
    }
}

TEST_CASE("jacobi eigenvalues bracket sign changes of the characteristic polynomial") {
    Rng rng(99);
    RealMatrix a(8, 8);
    for (index_t i = 0; i < 8; ++i)
        for (index_t j = i; j < 8; ++j) {
            const double v = rng.uniform(-1.0, 1.0);
            a(i, j) = v;
            a(j, i) = v;
        }
    std::vector<double> e = jacobi_dense_sym(a);
    const double delta = 1e-6;
    for (double lambda : e) {
        RealMatrix lo = a, hi = a;
        for (index_t i = 0; i < 8; ++i) {
            lo(i, i) -= lambda - delta;
            hi(i, i) -= lambda + delta;
        }
        // det(A - x I) changes sign across each simple eigenvalue
        CHECK(det_sign(lo) * det_sign(hi) == -1);
    }
}

TEST_CASE("lanczos_lowest examples") {
    {
        auto apply = [](const std::vector<double>& x) {
            std::vector<double> y(x.size());
            for (size_t i = 0; i < x.size(); ++i) y[i] = static_cast<double>(i + 1) * x[i];
            return y;
        };
        std::vector<double> e = lanczos_lowest(apply, 100, 3);
        CHECK(e[0] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(e[1] == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(e[2] == doctest::Approx(3.0).epsilon(1e-9));
    }
    {
        // FD Dirichlet Laplacian on [0,1] with 200 interior points
        const index_t n = 200;
        const double h = 1.0 / 201.0;
        auto apply = [&](const std::vector<double>& x) {
            std::vector<double> y(x.size());
            for (index_t i = 0; i < n; ++i) {
                double s = 2.0 * x[static_cast<size_t>(i)];
                if (i > 0) s -= x[static_cast<size_t>(i - 1)];
                if (i + 1 < n) s -= x[static_cast<size_t>(i + 1)];
                y[static_cast<size_t>(i)] = s / (h * h);
            }
            return y;
        };
        std::vector<double> e = lanczos_lowest(apply, n, 3);
        for (int k = 1; k <= 3; ++k) {
            const double exact = k * k * M_PI * M_PI;
            const double grid_bound = 1.01 * std::pow(k * M_PI, 4) * h * h / 12.0 + 1e-6;
            CHECK(std::abs(e[static_cast<size_t>(k - 1)] - exact) <= grid_bound);
        }
    }
    {
        Rng rng(11);
        const index_t n = 40;
        RealMatrix a(n, n);
        for (index_t i = 0; i < n; ++i)
            for (index_t j = i; j < n; ++j) {
                const double v = rng.uniform(-1.0, 1.0);
                a(i, j) = v;
                a(j, i) = v;
            }
        auto apply = [&](const std::vector<double>& x) { return a.apply(x); };
        std::vector<double> lz = lanczos_lowest(apply, n, 4);
        std::vector<double> dense = jacobi_dense_sym(a);
        for (int k = 0; k < 4; ++k)
            CHECK(std::abs(lz[static_cast<size_t>(k)] - dense[static_cast<size_t>(k)]) <= 1e-8);
    }
}

TEST_CASE("operator_norm examples and dense-oracle invariant") {
    auto ident = [](const std::vector<cplx>& x) { return x; };
    CHECK(operator_norm(ident, ident, 5, 1e-10) == doctest::Approx(1.0).epsilon(1e-8));

    {
        auto apply = [](const std::vector<cplx>& x) {
            std::vector<cplx> y = x;
            y[0] *= 3.0;
            return y;
        };
        CHECK(operator_norm(apply, apply, 2, 1e-10) == doctest::Approx(3.0).epsilon(1e-8));
    }

    Rng rng(5150);
    for (int trial = 0; trial < 50; ++trial) {
        const index_t n = 2 + static_cast<index_t>(rng.integer(11));
        const bool complex_case = (trial % 2 == 0);
        ComplexMatrix a = complex_case ? random_complex(rng, n) : complexify(random_real(rng, n));
        ComplexMatrix ah = a.adjoint();
        auto apply = [&](const std::vector<cplx>& x) { return a.apply(x); };
        auto applyh = [&](const std::vector<cplx>& x) { return ah.apply(x); };
        const double nrm = operator_norm(apply, applyh, n, 1e-9, {.seed = 1000 + static_cast<std::uint64_t>(trial)});
        std::vector<double> sv = hermitian_eigs(ah * a);
        const double oracle = std::sqrt(sv.back());
        CHECK(std::abs(nrm - oracle) <= 1e-6 * std::max(1.0, oracle));
    }
}

TEST_CASE("smallest_singular examples and inverse-norm identity") {
    CHECK(smallest_singular(RealMatrix::identity(4)) == doctest::Approx(1.0).epsilon(1e-9));
    {
        RealMatrix a(2, 2);
        a(0, 0) = 2.0; a(1, 1) = 0.5;
        CHECK(smallest_singular(a) == doctest::Approx(0.5).epsilon(1e-9));
    }
    {
        RealMatrix a(2, 2);
        a(0, 0) = 1; a(0, 1) = 1; a(1, 0) = 1; a(1, 1) = 1;
        CHECK(smallest_singular(a) == doctest::Approx(0.0));
    }

    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const index_t n = 2 + static_cast<index_t>(rng.integer(8));
        ComplexMatrix a = random_complex(rng, n);
        for (index_t i = 0; i < n; ++i) a(i, i) += 3.0;
        const double smin = smallest_singular(a, 1e-12);
        ComplexMatrix inv = lu_inverse(a);
        ComplexMatrix invh = inv.adjoint();
        auto apply = [&](const std::vector<cplx>& x) { return inv.apply(x); };
        auto applyh = [&](const std::vector<cplx>& x) { return invh.apply(x); };
        const double inv_norm = operator_norm(apply, applyh, n, 1e-11);
        CHECK(std::abs(smin * inv_norm - 1.0) <= 1e-8);
    }
}

TEST_CASE("shifted_inverse_eig examples") {
    {
        ComplexMatrix a(3, 3);
        a(0, 0) = 1; a(1, 1) = 2; a(2, 2) = 4;
        const cplx z0{1.8, 0.0};
        ComplexMatrix shifted = a;
        for (index_t i = 0; i < 3; ++i) shifted(i, i) -= z0;
        LuFactor<cplx> f(shifted);
        auto solve = [&](const std::vector<cplx>& x) { return f.solve(x); };
        const cplx lambda = shifted_inverse_eig(solve, 3, z0, 1e-12);
        CHECK(std::abs(lambda - cplx{2.0, 0.0}) <= 1e-10);
    }
    {
        ComplexMatrix a(2, 2);
        a(0, 1) = 1; a(1, 0) = -1;
        const cplx z0{0.0, 0.9};
        ComplexMatrix shifted = a;
        for (index_t i = 0; i < 2; ++i) shifted(i, i) -= z0;
        LuFactor<cplx> f(shifted);
        auto solve = [&](const std::vector<cplx>& x) { return f.solve(x); };
        const cplx lambda = shifted_inverse_eig(solve, 2, z0, 1e-12);
        CHECK(std::abs(lambda - cplx{0.0, 1.0}) <= 1e-10);
    }
    {
        // shift exactly on an eigenvalue: the factorization reports failure
        ComplexMatrix a(2, 2);
        a(0, 0) = 1; a(1, 1) = 2;
        ComplexMatrix shifted = a;
        for (index_t i = 0; i < 2; ++i) shifted(i, i) -= cplx{2.0, 0.0};
        auto solve = [&](const std::vector<cplx>& x) {
            LuFactor<cplx> f(shifted);
            if (f.singular()) throw singular_matrix_error("solve at eigenvalue");
            return f.solve(x);
        };
        CHECK_THROWS_AS(shifted_inverse_eig(solve, 2, cplx{2.0, 0.0}, 1e-12), singular_matrix_error);
    }
}

TEST_CASE("hermitian_pencil_smallest examples and oracle") {
    {
        ComplexMatrix a(2, 2), b = ComplexMatrix::identity(2);
        a(0, 0) = 2; a(1, 1) = 5;
        CHECK(hermitian_pencil_smallest(a, b) == doctest::Approx(2.0).epsilon(1e-9));
    }
    {
        ComplexMatrix a = ComplexMatrix::identity(2), b(2, 2);
        b(0, 0) = 2; b(1, 1) = 4;
        CHECK(hermitian_pencil_smallest(a, b) == doctest::Approx(0.25).epsilon(1e-9));
    }
    {
        Rng rng(8);
        const index_t n = 7;
        ComplexMatrix a(n, n), b(n, n);
        for (index_t i = 0; i < n; ++i) {
            for (index_t j = i + 1; j < n; ++j) {
                const cplx v{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
                a(i, j) = v;
                a(j, i) = std::conj(v);
                const cplx w = 0.2 * cplx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
                b(i, j) = w;
                b(j, i) = std::conj(w);
            }
            a(i, i) = rng.uniform(-1.0, 1.0);
            b(i, i) = 2.0 + rng.uniform(0.0, 1.0);
        }
        const double pencil = hermitian_pencil_smallest(a, b, 1e-12);

        // oracle: eigenvalues of B^{-1/2} A B^{-1/2} through B-eigendecomposition
        // (dense, small): form B^{-1/2} from hermitian embedding via jacobi
        RealMatrix e(2 * n, 2 * n);
        for (index_t i = 0; i < n; ++i)
            for (index_t j = 0; j < n; ++j) {
                e(i, j) = b(i, j).real();
                e(i + n, j + n) = b(i, j).real();
                e(i, j + n) = -b(i, j).imag();
                e(i + n, j) = b(i, j).imag();
            }
        RealMatrix v(2 * n, 2 * n);
        std::vector<double> be = jacobi_dense_sym(e, v);
        RealMatrix sqrt_inv(2 * n, 2 * n);
        for (index_t c = 0; c < 2 * n; ++c) {
            const double w = 1.0 / std::sqrt(be[static_cast<size_t>(c)]);
            for (index_t i = 0; i < 2 * n; ++i)
                for (index_t j = 0; j < 2 * n; ++j)
                    sqrt_inv(i, j) += w * v(i, c) * v(j, c);
        }
        RealMatrix ae(2 * n, 2 * n);
        for (index_t i = 0; i < n; ++i)
            for (index_t j = 0; j < n; ++j) {
                ae(i, j) = a(i, j).real();
                ae(i + n, j + n) = a(i, j).real();
                ae(i, j + n) = -a(i, j).imag();
                ae(i + n, j) = a(i, j).imag();
            }
        RealMatrix c = sqrt_inv * ae * sqrt_inv;
        for (index_t i = 0; i < 2 * n; ++i)
            for (index_t j = i + 1; j < 2 * n; ++j) {
                const double m = 0.5 * (c(i, j) + c(j, i));
                c(i, j) = m;
                c(j, i) = m;
            }
        std::vector<double> oracle = jacobi_dense_sym(c);
        CHECK(pencil == doctest::Approx(oracle.front()).epsilon(1e-8));
    }
    {
        ComplexMatrix a = ComplexMatrix::identity(2), b(2, 2);
        b(0, 0) = 1; b(1, 1) = -1; // not positive definite
        CHECK_THROWS_AS(hermitian_pencil_smallest(a, b), numerical_error);
    }
}

TEST_CASE("banded lu matches dense lu") {
    Rng rng(606);
    for (int trial = 0; trial < 30; ++trial) {
        const index_t n = 5 + static_cast<index_t>(rng.integer(60));
        const index_t kl = 1 + static_cast<index_t>(rng.integer(4));
        const index_t ku = 1 + static_cast<index_t>(rng.integer(4));
        BandedMatrix<double> ab(n, kl, ku);
        RealMatrix ad(n, n);
        for (index_t i = 0; i < n; ++i)
            for (index_t j = std::max<index_t>(0, i - kl); j <= std::min(n - 1, i + ku); ++j) {
                double v = rng.uniform(-1.0, 1.0);
                if (i == j) v += 3.0;
                ab.add(i, j, v);
                ad(i, j) = v;
            }
        std::vector<double> b(static_cast<size_t>(n));
        for (double& v : b) v = rng.uniform(-1.0, 1.0);

        BandedLu<double> fb(ab);
        REQUIRE(!fb.singular());
        std::vector<double> xb = fb.solve(b);
        std::vector<double> xd = lu_solve(ad, b);
        for (index_t i = 0; i < n; ++i)
            CHECK(std::abs(xb[static_cast<size_t>(i)] - xd[static_cast<size_t>(i)]) <= 1e-10);

        std::vector<double> xt = fb.solve_transpose(b);
        std::vector<double> xdt = lu_solve(ad.transpose(), b);
        for (index_t i = 0; i < n; ++i)
            CHECK(std::abs(xt[static_cast<size_t>(i)] - xdt[static_cast<size_t>(i)]) <= 1e-10);
    }
}

TEST_CASE("banded lu complex adjoint solve") {
    Rng rng(607);
    const index_t n = 24, kl = 3, ku = 2;
    BandedMatrix<cplx> ab(n, kl, ku);
    ComplexMatrix ad(n, n);
    for (index_t i = 0; i < n; ++i)
        for (index_t j = std::max<index_t>(0, i - kl); j <= std::min(n - 1, i + ku); ++j) {
            cplx v{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
            if (i == j) v += 4.0;
            ab.add(i, j, v);
            ad(i, j) = v;
        }
    std::vector<cplx> b(static_cast<size_t>(n));
    for (cplx& v : b) v = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    BandedLu<cplx> fb(ab);
    REQUIRE(!fb.singular());
    std::vector<cplx> x = fb.solve_adjoint(b);
    std::vector<cplx> r = ad.adjoint().apply(x);
    for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    CHECK(norm2(r) <= 1e-10 * norm2(b));
}

TEST_CASE("sparse symmetric apply accumulates duplicate triplets") {
    SparseSym s(3);
    s.add(0, 0, 1.0);
    s.add(0, 1, 2.0);
    s.add(0, 1, 0.5);
    s.add(2, 2, -1.0);
    std::vector<double> y = s.apply({1.0, 1.0, 1.0});
    CHECK(y[0] == doctest::Approx(3.5));
    CHECK(y[1] == doctest::Approx(2.5));
    CHECK(y[2] == doctest::Approx(-1.0));
}

TEST_CASE("lanczos respects a weighted inner product") {
    // generalized pencil A x = lambda M x (M diagonal) via M-inner Lanczos
    const index_t n = 30;
    std::vector<double> m(static_cast<size_t>(n));
    SymTridiag t{std::vector<double>(static_cast<size_t>(n), 2.0),
                 std::vector<double>(static_cast<size_t>(n - 1), -1.0)};
    Rng rng(12);
    for (double& v : m) v = 0.5 + rng.uniform01();

    auto apply = [&](const std::vector<double>& x) {
        // M^{-1} A x, self-adjoint w.r.t. the M inner product
        std::vector<double> y(x.size());
        for (index_t i = 0; i < n; ++i) {
            double s = t.diag[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
            if (i > 0) s += t.offdiag[static_cast<size_t>(i - 1)] * x[static_cast<size_t>(i - 1)];
            if (i + 1 < n) s += t.offdiag[static_cast<size_t>(i)] * x[static_cast<size_t>(i + 1)];
            y[static_cast<size_t>(i)] = s / m[static_cast<size_t>(i)];
        }
        return y;
    };
    LanczosOptions opts;
    opts.weight = m;
    std::vector<double> lo = lanczos_lowest(apply, n, 2, opts);

    // oracle: dense symmetric M^{-1/2} A M^{-1/2}
    RealMatrix a(n, n);
    for (index_t i = 0; i < n; ++i) a(i, i) = t.diag[static_cast<size_t>(i)];
    for (index_t i = 0; i + 1 < n; ++i) {
        a(i, i + 1) = t.offdiag[static_cast<size_t>(i)];
        a(i + 1, i) = t.offdiag[static_cast<size_t>(i)];
    }
    RealMatrix sym(n, n);
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < n; ++j)
            sym(i, j) = a(i, j) / std::sqrt(m[static_cast<size_t>(i)] * m[static_cast<size_t>(j)]);
    std::vector<double> oracle = jacobi_dense_sym(sym);
    CHECK(lo[0] == doctest::Approx(oracle[0]).epsilon(1e-9));
    CHECK(lo[1] == doctest::Approx(oracle[1]).epsilon(1e-9));
}

TEST_CASE("lanczos reports non-convergence within the iteration budget") {
    // slowly separated spectrum plus a tiny budget cannot stabilize
    auto apply = [](const std::vector<double>& x) {
        std::vector<double> y(x.size());
        for (size_t i = 0; i < x.size(); ++i) y[i] = (1.0 + 1e-9 * static_cast<double>(i)) * x[i];
        return y;
    };
    LanczosOptions opts;
    opts.max_iter = 2;
    CHECK_THROWS_AS(lanczos_lowest(apply, 400, 2, opts), convergence_error);
}
