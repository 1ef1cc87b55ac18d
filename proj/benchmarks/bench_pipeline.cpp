#include <benchmark/benchmark.h>

#include "sdhdg/assembly.hpp"
#include "sdhdg/condense.hpp"
#include "sdhdg/experiment.hpp"
#include "sdhdg/manufactured.hpp"
#include "sdhdg/mesh.hpp"
#include "sdhdg/precond.hpp"

using namespace sdhdg;

namespace {

struct Fixture {
  Mesh2D mesh;
  FormsContext ctx;
  PhysicalParams params;
  DofMap dofs;
  ProblemData data;

  explicit Fixture(int n, int k) : mesh(build_structured_mesh(n)), ctx(k) {
    params.k = k;
    data = make_smooth_case(params).data;
    dofs = build_dofmap(mesh, k);
  }
};

void BM_Assemble(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) {
    BlockSystem sys = assemble_system(f.mesh, f.ctx, f.params, f.data, f.dofs);
    benchmark::DoNotOptimize(sys.A);
  }
  state.SetComplexityN(state.range(0));
}

void BM_Condense(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)), 2);
  const BlockSystem sys = assemble_system(f.mesh, f.ctx, f.params, f.data, f.dofs);
  for (auto _ : state) {
    CondensedSystem cs(sys.A, sys.ncell, sys.slices);
    benchmark::DoNotOptimize(cs.schur());
  }
  state.SetComplexityN(state.range(0));
}

void BM_PrecondSetup(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) {
    FacetPreconditioner P =
        build_precond(f.mesh, f.ctx, f.params, f.dofs, PrecondVariant::Phat);
    benchmark::DoNotOptimize(P.size());
  }
}

void BM_PrecondApply(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)), 2);
  const FacetPreconditioner P =
      build_precond(f.mesh, f.ctx, f.params, f.dofs, PrecondVariant::Phat);
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(P.size(), -1.0, 1.0);
  for (auto _ : state) {
    Eigen::VectorXd y = P.apply_inverse(x);
    benchmark::DoNotOptimize(y);
  }
}

void BM_Solve(benchmark::State& state) {
  for (auto _ : state) {
    ExperimentConfig cfg;
    cfg.n = static_cast<int>(state.range(0));
    cfg.k = 2;
    cfg.solver = SolverKind::Minres;
    cfg.variant = PrecondVariant::Phat;
    ExperimentResult r = run_experiment(cfg);
    benchmark::DoNotOptimize(r.report.iterations);
  }
}

}  // namespace

BENCHMARK(BM_Assemble)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Condense)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PrecondSetup)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PrecondApply)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Solve)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
