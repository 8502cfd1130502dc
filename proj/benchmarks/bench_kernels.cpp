// Microbenchmarks for the hot kernels: the truncated likelihood series, the
// FFT quadratic solve, and the per-pixel Hessian shrinkage.

#include <benchmark/benchmark.h>

#include "pgrestore/likelihood.hpp"
#include "pgrestore/prox.hpp"

using namespace pgr;

static void BM_SDelta(benchmark::State& state) {
    NoiseModel model{1.0, 3.0, 0.0, 1.0};
    double delta = static_cast<double>(state.range(0));
    double m = 7.3, mp = 8.1;
    for (auto _ : state) {
        auto out = s_delta(m, mp, delta, model);
        benchmark::DoNotOptimize(out.log_s);
    }
}
BENCHMARK(BM_SDelta)->Arg(4)->Arg(12)->Arg(40);

static void BM_Grad1Delta(benchmark::State& state) {
    NoiseModel model{1.0, 3.0, 0.0, 1.0};
    for (auto _ : state) {
        double g = grad1_delta(7.3, 8.1, 12.0, model);
        benchmark::DoNotOptimize(g);
    }
}
BENCHMARK(BM_Grad1Delta);

static void BM_SolveG(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    CirculantOperator H = make_gaussian_psf(n, n, 1.5);
    DerivativeStack D = make_derivative_stack(n, n);
    QuadSolveContext ctx = make_quad_solve_context(H, D);
    Image m(n, n, 1.0), m_hat(n, n), b(n, n, 0.5), b_hat(n, n);
    HessianField d(n, n), d_hat(n, n);
    for (auto _ : state) {
        Image g = solve_g(ctx, m, m_hat, d, d_hat, b, b_hat, 1.0);
        benchmark::DoNotOptimize(g.data.data());
    }
}
BENCHMARK(BM_SolveG)->Arg(32)->Arg(64)->Arg(128);

static void BM_ShrinkHessian(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    int q = static_cast<int>(state.range(1));
    HessianField f(n, n);
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < f.pixels(); ++i)
            f.comps[c][i] = 0.01 * static_cast<double>((i * (c + 3)) % 101) - 0.5;
    for (auto _ : state) {
        HessianField out = shrink_hessian(f, 0.1, q);
        benchmark::DoNotOptimize(out.comps[0].data());
    }
}
BENCHMARK(BM_ShrinkHessian)->Args({64, 1})->Args({64, 2})->Args({128, 1})->Args({128, 2});

BENCHMARK_MAIN();
