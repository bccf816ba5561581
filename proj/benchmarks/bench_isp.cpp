#include "chaoscoupler/galerkin.hpp"
#include "chaoscoupler/models/linear_model.hpp"
#include "chaoscoupler/models/thermal_neutronics.hpp"

#include <benchmark/benchmark.h>

using namespace chaoscoupler;

namespace {

void BM_LinearStandard(benchmark::State& state) {
  const models::LinearCoupledModel m({});
  galerkin::IspOptions o;
  o.p = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(galerkin::run_standard_isp(m, 2, 2, o));
}
BENCHMARK(BM_LinearStandard)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

// Coarse thermal-neutronics grid; the desk-scale comparison lives in the CLI.
void BM_ThermalNeutronics(benchmark::State& state) {
  models::TnParams prm;
  prm.m = 11;
  const models::ThermalNeutronicsModel m(prm);
  galerkin::IspOptions o;
  o.p = state.range(1);
  galerkin::ReducedOptions r;
  r.eps_dim[0] = 0.02;
  r.eps_dim[1] = 0.05;
  r.eps_ord[0] = r.eps_ord[1] = 1e-4;
  for (auto _ : state) {
    if (state.range(0) == 0)
      benchmark::DoNotOptimize(galerkin::run_standard_isp(m, 3, 3, o));
    else
      benchmark::DoNotOptimize(galerkin::run_reduced_isp(m, 3, 3, o, r));
  }
  state.SetLabel(state.range(0) == 0 ? "standard" : "reduced");
}
BENCHMARK(BM_ThermalNeutronics)->ArgsProduct({{0, 1}, {2, 3}})->Unit(benchmark::kSecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
