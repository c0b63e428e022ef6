#include "spectral_dd/assembly.hpp"
#include "spectral_dd/pipeline.hpp"
#include "spectral_dd/spectral.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

sdd::CoefficientField islands(const sdd::StructuredGrid& grid, double contrast) {
  sdd::GeometrySpec spec;
  spec.kind = sdd::GeometryKind::many_islands;
  spec.seed = 5;
  spec.island_count = grid.fine_cells() * grid.fine_cells() / 40;
  spec.island_size = 1;
  return sdd::generate(grid, spec, contrast);
}

void BM_AssembleGlobal(benchmark::State& state) {
  const sdd::StructuredGrid grid(8, static_cast<int>(state.range(0)));
  const auto field = islands(grid, 1e6);
  for (auto _ : state) {
    auto sys = sdd::assemble_global(grid, field);
    benchmark::DoNotOptimize(sys.A.nonZeros());
  }
  state.SetItemsProcessed(state.iterations() * grid.fine_cell_count());
}
BENCHMARK(BM_AssembleGlobal)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_PatchEigensolve(benchmark::State& state) {
  const sdd::StructuredGrid grid(4, static_cast<int>(state.range(0)));
  const auto patches = sdd::subdomain_patches(grid);
  const auto field = islands(grid, 1e6);
  const auto pou = sdd::standard_pou(grid);
  const auto& patch = patches[grid.coarse_node(2, 2)];
  const auto ops = sdd::assemble_patch(grid, field, patch, patches, pou);
  for (auto _ : state) {
    auto spectrum = sdd::solve_patch_eig(ops, {0.5, 64});
    benchmark::DoNotOptimize(spectrum.eigenvalues.data());
  }
  state.counters["dofs"] = static_cast<double>(ops.nodes.size());
}
BENCHMARK(BM_PatchEigensolve)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_PreconditionerApply(benchmark::State& state) {
  const sdd::StructuredGrid grid(8, static_cast<int>(state.range(0)));
  const auto patches = sdd::subdomain_patches(grid);
  const auto field = islands(grid, 1e6);
  auto setup = sdd::setup_scalar(grid, patches, field, sdd::linear_drop_x(), sdd::CoarseVariant::spectral_standard_pou);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d;
  sdd::Vector r(grid.dof_count());
  for (auto& x : r) x = d(rng);
  for (auto _ : state) {
    sdd::Vector z = setup.preconditioner->apply(r);
    benchmark::DoNotOptimize(z.data());
  }
  state.counters["coarse_dim"] = setup.coarse.dimension();
}
BENCHMARK(BM_PreconditionerApply)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_Solve(benchmark::State& state) {
  const sdd::StructuredGrid grid(8, 8);
  const auto patches = sdd::subdomain_patches(grid);
  const auto field = islands(grid, 1e6);
  const auto variant = static_cast<sdd::CoarseVariant>(state.range(0));
  for (auto _ : state) {
    auto setup = sdd::setup_scalar(grid, patches, field, sdd::linear_drop_x(), variant);
    auto res = sdd::pcg(setup.system.A, *setup.preconditioner, setup.system.rhs);
    state.counters["iterations"] = res.report.iterations;
  }
  state.SetLabel(sdd::to_string(variant));
}
BENCHMARK(BM_Solve)
    ->Arg(static_cast<int>(sdd::CoarseVariant::standard))
    ->Arg(static_cast<int>(sdd::CoarseVariant::spectral_standard_pou))
    ->Arg(static_cast<int>(sdd::CoarseVariant::spectral_multiscale_pou))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
