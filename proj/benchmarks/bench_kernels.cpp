#include "chaoscoupler/basis.hpp"
#include "chaoscoupler/dimreduce.hpp"
#include "chaoscoupler/ordreduce.hpp"
#include "chaoscoupler/quadrature.hpp"
#include "chaoscoupler/rng.hpp"

#include <benchmark/benchmark.h>

using namespace chaoscoupler;

namespace {

const auto kFam = orthopoly::build_family(orthopoly::Distribution::UniformSymmetric, 16);

Eigen::MatrixXd noise(int r, int c, std::uint64_t seed) {
  Eigen::MatrixXd A(r, c);
  for (int i = 0; i < A.size(); ++i) A.data()[i] = rng::symmetric(seed, 0, i);
  return A;
}

void BM_BasisTable(benchmark::State& state) {
  const int s = state.range(0), p = state.range(1);
  const basis::MultiIndexSet set(s, p);
  const auto rule = quadrature::tensor_rule(kFam, s, p);
  for (auto _ : state) benchmark::DoNotOptimize(basis::eval_basis_table(set, kFam, rule.nodes));
  state.counters["points"] = rule.size();
}
BENCHMARK(BM_BasisTable)->Args({3, 2})->Args({3, 4})->Args({6, 3})->Unit(benchmark::kMillisecond);

void BM_TensorRule(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(quadrature::tensor_rule(kFam, state.range(0), state.range(1)));
}
BENCHMARK(BM_TensorRule)->Args({3, 4})->Args({6, 4})->Unit(benchmark::kMicrosecond);

void BM_CompressRule(benchmark::State& state) {
  const int d = state.range(0), degree = state.range(1);
  const auto parent = quadrature::tensor_rule(kFam, 3, 4);
  const basis::MultiIndexSet set(3, 2);
  const Eigen::MatrixXd th = noise(d, set.size(), 5) * basis::eval_basis_table(set, kFam, parent.nodes).transpose();
  for (auto _ : state) benchmark::DoNotOptimize(quadrature::compress_rule(th, parent.weights, degree));
}
BENCHMARK(BM_CompressRule)->Args({2, 2})->Args({2, 4})->Args({4, 4})->Unit(benchmark::kMillisecond);

void BM_ReducedBasis(benchmark::State& state) {
  const int d = state.range(0), order = state.range(1);
  const auto parent = quadrature::tensor_rule(kFam, 3, 4);
  const basis::MultiIndexSet set(3, 2);
  const Eigen::MatrixXd th = noise(d, set.size(), 7) * basis::eval_basis_table(set, kFam, parent.nodes).transpose();
  for (auto _ : state) benchmark::DoNotOptimize(ordreduce::build_reduced_basis(th, parent.weights, order));
}
BENCHMARK(BM_ReducedBasis)->Args({2, 1})->Args({2, 3})->Args({4, 2})->Unit(benchmark::kMicrosecond);

void BM_DimensionReduce(benchmark::State& state) {
  const int n = state.range(0), p = state.range(1);
  const basis::BasisSplit split(3, 3, p);
  const Eigen::MatrixXd Y = noise(n, split.global().size(), 11);
  const dimreduce::StackedInput in{1, n / 2, Y, Gramian::identity(n)};
  for (auto _ : state) benchmark::DoNotOptimize(dimreduce::reduce(in, split, 1e-2));
}
BENCHMARK(BM_DimensionReduce)->Args({100, 2})->Args({400, 3})->Args({400, 4})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
