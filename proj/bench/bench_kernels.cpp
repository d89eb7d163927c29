#include <benchmark/benchmark.h>

#include "stlf/kernels.hpp"
#include "stlf/network.hpp"
#include "stlf/random.hpp"

using namespace stlf;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (double& v : m.row(r)) v = rng.uniform(-1, 1);
  return m;
}

Execution exec_of(const benchmark::State& state) {
  return state.range(1) ? Execution::Parallel : Execution::Serial;
}

void BM_Gram(benchmark::State& state) {
  const Matrix j = random_matrix(static_cast<std::size_t>(state.range(0)), 231, 1);
  const auto exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::gram(j, exec));
  state.SetLabel(exec == Execution::Parallel ? "parallel" : "serial");
}

void BM_GramReference(benchmark::State& state) {
  const Matrix j = random_matrix(static_cast<std::size_t>(state.range(0)), 231, 1);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::gram_serial(j));
}

void BM_Gradient(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const Matrix j = random_matrix(rows, 231, 2);
  const Vector e(rows, 0.5);
  const auto exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::gradient(j, e, exec));
  state.SetLabel(exec == Execution::Parallel ? "parallel" : "serial");
}

std::vector<Window> windows(std::size_t count, std::size_t length, std::size_t inputs) {
  Rng rng(3);
  std::vector<Window> out(count);
  for (auto& w : out)
    for (std::size_t t = 0; t < length; ++t) {
      Vector x(inputs);
      for (double& v : x) v = rng.uniform(-1, 1);
      w.inputs.push_back(std::move(x));
      w.targets.push_back({rng.uniform(-1, 1)});
    }
  return out;
}

void BM_RnnJacobian(benchmark::State& state) {
  NetworkSpec spec;
  spec.recurrent = true;
  const auto params = init_params(spec, 4);
  const auto data = windows(static_cast<std::size_t>(state.range(0)), 24, spec.input_dim);
  const auto exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(rnn_jacobian(params, data, exec));
  state.SetLabel(exec == Execution::Parallel ? "parallel" : "serial");
}

void BM_FnnJacobian(benchmark::State& state) {
  NetworkSpec spec;
  spec.recurrent = false;
  Rng rng(5);
  const auto params = init_params(spec, 4);
  std::vector<Sample> batch(static_cast<std::size_t>(state.range(0)));
  for (auto& s : batch) {
    s.input.resize(spec.input_dim);
    for (double& v : s.input) v = rng.uniform(-1, 1);
    s.target = {rng.uniform(-1, 1)};
  }
  const auto exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(fnn_jacobian(params, batch, exec));
  state.SetLabel(exec == Execution::Parallel ? "parallel" : "serial");
}

}  // namespace

BENCHMARK(BM_Gram)->ArgsProduct({{1024, 4096}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GramReference)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Gradient)->ArgsProduct({{1024, 4096}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FnnJacobian)->ArgsProduct({{1024, 4096}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RnnJacobian)->ArgsProduct({{8, 32}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
