#include <benchmark/benchmark.h>
#include <mhilb/mhilb.hpp>

#include <random>

using namespace mhilb;

namespace {

cxmat bench_gram(std::uint64_t seed, int n) {
    std::mt19937_64 rng(seed);
    cxmat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = cxd(2 * u01(rng) - 1, 2 * u01(rng) - 1);
    cxmat k = m.adjoint() * m;
    k += (1e-6 * m.squaredNorm()) * cxmat::Identity(n, n);
    return k;
}

void bm_build_chart(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const cxmat k = bench_gram(1, n);
    for (auto _ : state) {
        auto chart = build_chart(gram_kernel::from_matrix(k));
        benchmark::DoNotOptimize(chart);
    }
}
BENCHMARK(bm_build_chart)->Arg(8)->Arg(64);

void bm_primary_apply(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto chart = build_chart(gram_kernel::from_matrix(bench_gram(2, n)));
    index_set J;
    for (int j = 1; j <= n; j += 2) J.push_back(j);
    auto p = primary(chart, J);
    std::mt19937_64 rng(3);
    cxvec v(n);
    for (int i = 0; i < n; ++i) v(i) = cxd(u01(rng), u01(rng));
    state_vector psi{v / v.norm()};
    for (auto _ : state) {
        auto out = p.apply(psi);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(bm_primary_apply)->Arg(8)->Arg(64);

void bm_expm(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::mt19937_64 rng(4);
    cxmat a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = cxd(2 * u01(rng) - 1, 2 * u01(rng) - 1);
    const cxmat skew = 0.5 * (a - a.adjoint());
    for (auto _ : state) {
        cxmat e = expm(skew);
        benchmark::DoNotOptimize(e);
    }
}
BENCHMARK(bm_expm)->Arg(8)->Arg(32);

void bm_evolve_state(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::mt19937_64 rng(5);
    cxmat a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = cxd(2 * u01(rng) - 1, 2 * u01(rng) - 1);
    const hamiltonian ham(cxmat(0.5 * (a + a.adjoint())), 1.0);
    cxvec v(n);
    for (int i = 0; i < n; ++i) v(i) = cxd(u01(rng), u01(rng));
    state_vector psi{v / v.norm()};
    double t = 0.1;
    for (auto _ : state) {
        auto out = evolve_state(ham, t, psi);
        benchmark::DoNotOptimize(out);
        t += 1e-6;  // defeat any caching by the compiler
    }
}
BENCHMARK(bm_evolve_state)->Arg(8)->Arg(32);

void bm_generate_instance(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        auto inst = generate_instance(seed++, n);
        benchmark::DoNotOptimize(inst);
    }
}
BENCHMARK(bm_generate_instance)->Arg(8)->Arg(16);

void bm_verifier_sweep(benchmark::State& state) {
    verify_options opt;
    opt.seeds = {1, 2};
    opt.sizes = {2, 4};
    for (auto _ : state) {
        auto rep = run_all(opt);
        benchmark::DoNotOptimize(rep);
    }
}
BENCHMARK(bm_verifier_sweep);

}  // namespace

BENCHMARK_MAIN();
