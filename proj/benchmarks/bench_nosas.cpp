// Copyright The nosas Authors.
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "nosas/assemble.hpp"
#include "nosas/driver.hpp"
#include "nosas/mesh.hpp"
#include "nosas/precond.hpp"
#include "nosas/spectra.hpp"
#include "nosas/substructure.hpp"

namespace
{

constexpr double kWave = 20.0;

void BM_AssembleGlobal(benchmark::State &state)
{
  const int inv_h = static_cast<int>(state.range(0));
  const nosas::Mesh mesh = nosas::build_mesh(inv_h);
  const nosas::Decomposition dec = nosas::build_decomposition(mesh, 4);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(nosas::assemble_global(mesh, dec, kWave));
  }
}
BENCHMARK(BM_AssembleGlobal)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_SubstructureSetup(benchmark::State &state)
{
  const int inv_h = static_cast<int>(state.range(0));
  const int inv_H = static_cast<int>(state.range(1));
  for (auto _ : state)
  {
    nosas::Mesh mesh = nosas::build_mesh(inv_h);
    nosas::Decomposition dec = nosas::build_decomposition(mesh, inv_H);
    nosas::Substructure s(std::move(mesh), std::move(dec), kWave, 0.01);
    benchmark::DoNotOptimize(s.num_gamma());
  }
}
BENCHMARK(BM_SubstructureSetup)->Args({32, 4})->Args({64, 8})->Unit(benchmark::kMillisecond);

nosas::Substructure make(int inv_h, int inv_H)
{
  nosas::Mesh mesh = nosas::build_mesh(inv_h);
  nosas::Decomposition dec = nosas::build_decomposition(mesh, inv_H);
  return nosas::Substructure(std::move(mesh), std::move(dec), kWave, 0.01);
}

void BM_Spectra(benchmark::State &state)
{
  const nosas::Substructure s = make(32, 4);
  nosas::SpectraOptions o;
  o.kind = static_cast<nosas::PrecondKind>(state.range(0));
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(nosas::compute_spectra(s, o));
  }
}
BENCHMARK(BM_Spectra)
    ->Arg(static_cast<int>(nosas::PrecondKind::P1))
    ->Arg(static_cast<int>(nosas::PrecondKind::P4))
    ->Unit(benchmark::kMillisecond);

void BM_CoarseInverse(benchmark::State &state)
{
  const nosas::Substructure s = make(64, 4);
  nosas::SpectraOptions o;
  const nosas::Preconditioner p(s, nosas::compute_spectra(s, o), nosas::PrecondKind::P4);
  const nosas::ComplexVector r = nosas::ComplexVector::Ones(s.B0().rows());
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(p.apply_coarse_inverse(r));
  }
}
BENCHMARK(BM_CoarseInverse)->Unit(benchmark::kMicrosecond);

void BM_RunCell(benchmark::State &state)
{
  nosas::ExperimentConfig c;
  c.inv_h = static_cast<int>(state.range(0));
  c.inv_H = static_cast<int>(state.range(1));
  for (auto _ : state)
  {
    const nosas::RunResult r = nosas::run(c);
    state.counters["iterations"] = r.iterations;
  }
}
BENCHMARK(BM_RunCell)->Args({32, 4})->Args({64, 4})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
