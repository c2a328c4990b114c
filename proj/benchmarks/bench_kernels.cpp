#include <benchmark/benchmark.h>

#include <cmath>

#include "dimred/banded.hpp"
#include "dimred/dirichlet_layer.hpp"
#include "dimred/iterative.hpp"
#include "dimred/jacobi.hpp"
#include "dimred/rng.hpp"
#include "dimred/toymodel.hpp"
#include "dimred/tridiag.hpp"

using namespace dimred;
using namespace dimred::numkernel;

namespace {

SymTridiag random_tridiag(index_t n, std::uint64_t seed) {
    Rng rng(seed);
    SymTridiag t;
    t.diag.resize(static_cast<size_t>(n));
    t.offdiag.resize(static_cast<size_t>(n - 1));
    for (double& v : t.diag) v = rng.uniform(-2.0, 2.0);
    for (double& v : t.offdiag) v = rng.uniform(-2.0, 2.0);
    return t;
}

} // namespace

static void BM_SturmEigs(benchmark::State& state) {
    const index_t n = state.range(0);
    SymTridiag t = random_tridiag(n, 99);
    for (auto _ : state) {
        auto e = sym_tridiag_eigs(t, 5);
        benchmark::DoNotOptimize(e);
    }
}
BENCHMARK(BM_SturmEigs)->Arg(128)->Arg(512)->Arg(2048);

static void BM_JacobiDense(benchmark::State& state) {
    const index_t n = state.range(0);
    Rng rng(7);
    RealMatrix a(n, n);
    for (index_t i = 0; i < n; ++i)
        for (index_t j = i; j < n; ++j) {
            const double v = rng.uniform(-1.0, 1.0);
            a(i, j) = v;
            a(j, i) = v;
        }
    for (auto _ : state) {
        auto e = jacobi_dense_sym(a);
        benchmark::DoNotOptimize(e);
    }
}
BENCHMARK(BM_JacobiDense)->Arg(16)->Arg(64)->Arg(128);

static void BM_BandedLuSolve(benchmark::State& state) {
    const index_t n = state.range(0), band = 32;
    Rng rng(5);
    BandedMatrix<double> a(n, band, band);
    for (index_t i = 0; i < n; ++i)
        for (index_t j = std::max<index_t>(0, i - band); j <= std::min(n - 1, i + band); ++j)
            a.add(i, j, (i == j ? 8.0 : 0.0) + rng.uniform(-1.0, 1.0));
    BandedLu<double> lu(std::move(a));
    std::vector<double> b(static_cast<size_t>(n));
    for (double& v : b) v = rng.uniform(-1.0, 1.0);
    for (auto _ : state) {
        auto x = lu.solve(b);
        benchmark::DoNotOptimize(x);
    }
}
BENCHMARK(BM_BandedLuSolve)->Arg(4096)->Arg(16384);

static void BM_OperatorNorm(benchmark::State& state) {
    const index_t n = state.range(0);
    Rng rng(11);
    ComplexMatrix a(n, n);
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < n; ++j) a(i, j) = cplx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    ComplexMatrix ah = a.adjoint();
    auto apply = [&](const std::vector<cplx>& x) { return a.apply(x); };
    auto applyh = [&](const std::vector<cplx>& x) { return ah.apply(x); };
    for (auto _ : state) {
        const double nrm = operator_norm(apply, applyh, n, 1e-8);
        benchmark::DoNotOptimize(nrm);
    }
}
BENCHMARK(BM_OperatorNorm)->Arg(32)->Arg(128);

static void BM_ToyCertificate(benchmark::State& state) {
    Rng rng(2027);
    toymodel::ToyInstance inst = toymodel::random_instance(rng, 5, 4, 1.5);
    for (auto _ : state) {
        auto chk = toymodel::check_theorem11(inst, cplx{-0.5, 0.7});
        benchmark::DoNotOptimize(chk);
    }
}
BENCHMARK(BM_ToyCertificate);

static void BM_LayerEigs(benchmark::State& state) {
    geometry::CurveProfile p(1.0, 0.3);
    layer::LayerModel m{p, 0.1, static_cast<index_t>(state.range(0)), static_cast<index_t>(state.range(0))};
    for (auto _ : state) {
        auto e = layer::layer_eigs_raw(m, 2);
        benchmark::DoNotOptimize(e);
    }
}
BENCHMARK(BM_LayerEigs)->Arg(24)->Arg(48);

BENCHMARK_MAIN();
