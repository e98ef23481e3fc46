#include <benchmark/benchmark.h>

#include "specgeo/closed_forms.hpp"
#include "specgeo/experiments.hpp"
#include "specgeo/fem.hpp"
#include "specgeo/meshgen.hpp"
#include "specgeo/planner.hpp"
#include "specgeo/trimesh.hpp"

using namespace specgeo;

static void bm_gen_icosphere(benchmark::State& state) {
    const int level = static_cast<int>(state.range(0));
    for (auto _ : state) {
        TriMesh m = gen_icosphere(level, 1.0);
        benchmark::DoNotOptimize(m.vertices.data());
    }
}
BENCHMARK(bm_gen_icosphere)->Arg(3)->Arg(4)->Arg(5);

static void bm_glue_dumbbell(benchmark::State& state) {
    const int level = static_cast<int>(state.range(0));
    for (auto _ : state) {
        TriMesh m = glue_dumbbell(0.15, 0.5, level);
        benchmark::DoNotOptimize(m.vertices.data());
    }
}
BENCHMARK(bm_glue_dumbbell)->Arg(2)->Arg(3)->Arg(4);

static void bm_validate(benchmark::State& state) {
    TriMesh m = gen_icosphere(static_cast<int>(state.range(0)), 1.0);
    for (auto _ : state) {
        MeshReport r = validate(m);
        benchmark::DoNotOptimize(r.chi);
    }
}
BENCHMARK(bm_validate)->Arg(4)->Arg(5);

static void bm_enclosed_volume(benchmark::State& state) {
    TriMesh m = gen_icosphere(static_cast<int>(state.range(0)), 1.0);
    for (auto _ : state) {
        double v = enclosed_volume(m);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(bm_enclosed_volume)->Arg(4)->Arg(5)->Arg(6);

static void bm_assemble_stiffness(benchmark::State& state) {
    TriMesh m = gen_icosphere(static_cast<int>(state.range(0)), 1.0);
    for (auto _ : state) {
        SparseSymMatrix k = assemble_stiffness(m);
        benchmark::DoNotOptimize(k.lower.valuePtr());
    }
}
BENCHMARK(bm_assemble_stiffness)->Arg(4)->Arg(5);

static void bm_assemble_mass_lumped(benchmark::State& state) {
    TriMesh m = gen_icosphere(static_cast<int>(state.range(0)), 1.0);
    for (auto _ : state) {
        SparseSymMatrix mm = assemble_mass(m, true);
        benchmark::DoNotOptimize(mm.lower.valuePtr());
    }
}
BENCHMARK(bm_assemble_mass_lumped)->Arg(4)->Arg(5);

static void bm_solve_lowest(benchmark::State& state) {
    TriMesh mesh = gen_icosphere(static_cast<int>(state.range(0)), 1.0);
    SparseSymMatrix k = assemble_stiffness(mesh);
    SparseSymMatrix m = assemble_mass(mesh, true);
    const int num = static_cast<int>(state.range(1));
    for (auto _ : state) {
        EigResult r = solve_lowest(k, m, num, 1e-9);
        benchmark::DoNotOptimize(r.values.data());
    }
}
BENCHMARK(bm_solve_lowest)->Args({3, 8})->Args({4, 8})->Args({4, 16});

static void bm_sphere_spectrum(benchmark::State& state) {
    const std::int64_t count = state.range(0);
    for (auto _ : state) {
        Spectrum s = sphere_spectrum(2, count);
        benchmark::DoNotOptimize(s.values.data());
    }
}
BENCHMARK(bm_sphere_spectrum)->Arg(1000)->Arg(1000000);

static void bm_weyl_scan(benchmark::State& state) {
    const std::int64_t kmax = state.range(0);
    for (auto _ : state) {
        WeylTable t = run_weyl_experiment(2, kmax);
        benchmark::DoNotOptimize(t.k1);
    }
}
BENCHMARK(bm_weyl_scan)->Arg(10000)->Arg(1000000);

static void bm_plan_certificate(benchmark::State& state) {
    PiecewiseLinear f = PiecewiseLinear::constant(100.0);
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        PlanCertificate c = plan_counterexample(n, 1.0, f, 100000);
        benchmark::DoNotOptimize(c.k0);
    }
}
BENCHMARK(bm_plan_certificate)->Arg(2)->Arg(5);

static void bm_dip_certificate(benchmark::State& state) {
    const std::int64_t l = state.range(0);
    for (auto _ : state) {
        bool b = sphere_dip_exceeds_half(5, l);
        benchmark::DoNotOptimize(b);
    }
}
BENCHMARK(bm_dip_certificate)->Arg(100)->Arg(100000);

BENCHMARK_MAIN();
