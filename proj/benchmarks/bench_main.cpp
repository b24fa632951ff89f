#include <benchmark/benchmark.h>

#include "ldlrec/graph.hpp"
#include "ldlrec/hiding.hpp"
#include "ldlrec/metrics.hpp"
#include "ldlrec/simplex.hpp"
#include "ldlrec/solver.hpp"
#include "ldlrec/synthetic.hpp"

using namespace ldlrec;

namespace {

Dataset bench_dataset(Eigen::Index n) {
  SyntheticSpec spec;
  spec.n = n;
  spec.seed = 42;
  return generate_synthetic(spec);
}

void BM_BuildGraph(benchmark::State& state) {
  const Dataset data = bench_dataset(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_graph(data.features, 6, 1.0));
  }
}
BENCHMARK(BM_BuildGraph)->Arg(200)->Arg(400);

void BM_Solve(benchmark::State& state) {
  const Dataset data = bench_dataset(state.range(0));
  const SimilarityGraph graph = build_graph(data.features, 6, 1.0);
  const HiddenView hidden = hide(data.labels, generate_mask(data.labels, 0.5, 7));
  SolverConfig config;
  config.seed = 7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(hidden, graph, config));
  }
}
BENCHMARK(BM_Solve)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_ProjectSimplexRows(benchmark::State& state) {
  const Dataset data = bench_dataset(200);
  Eigen::MatrixXd noisy = data.labels.array() - 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_simplex_rows(noisy));
  }
}
BENCHMARK(BM_ProjectSimplexRows);

void BM_SingularValueThreshold(benchmark::State& state) {
  const Dataset data = bench_dataset(200);
  const Eigen::MatrixXd lambda = Eigen::MatrixXd::Ones(200, 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(update_A(data.labels, lambda, 0.25, 2.0));
  }
}
BENCHMARK(BM_SingularValueThreshold);

void BM_Evaluate(benchmark::State& state) {
  const Dataset data = bench_dataset(200);
  const HiddenView hidden = hide(data.labels, generate_mask(data.labels, 0.5, 3));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(hidden.observed, data.labels));
  }
}
BENCHMARK(BM_Evaluate);

}  // namespace

BENCHMARK_MAIN();
