#include <benchmark/benchmark.h>

#include <memory>

#include <oksvm/dataset.hpp>
#include <oksvm/kernel.hpp>
#include <oksvm/optimizer.hpp>
#include <oksvm/solver.hpp>

using namespace oksvm;

namespace {

Dataset data_for(const benchmark::State& state, double sep = 1.0) {
    return generate_synthetic({static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)), sep, 7});
}

void BM_SquaredDistances(benchmark::State& state) {
    const auto data = data_for(state);
    for (auto _ : state) benchmark::DoNotOptimize(squared_distance_matrix(data.features()));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SquaredDistances)->ArgsProduct({{100, 400, 1600}, {2, 8}})->Complexity(benchmark::oNSquared);

void BM_RbfKernel(benchmark::State& state) {
    const auto data = data_for(state);
    const auto d2 = std::make_shared<const DistanceMatrix>(squared_distance_matrix(data.features()));
    for (auto _ : state) benchmark::DoNotOptimize(rbf_kernel_matrix(d2, 0.7));
}
BENCHMARK(BM_RbfKernel)->ArgsProduct({{100, 400, 1600}, {2}});

void BM_KernelWithGamma(benchmark::State& state) {
    const auto data = data_for(state);
    const auto k = rbf_kernel_matrix(std::make_shared<const DistanceMatrix>(squared_distance_matrix(data.features())), 0.7);
    double gamma = 0.7;
    for (auto _ : state) {
        gamma = gamma > 2.0 ? 0.7 : gamma * 1.01;
        benchmark::DoNotOptimize(k.with_gamma(gamma));
    }
}
BENCHMARK(BM_KernelWithGamma)->ArgsProduct({{100, 400, 1600}, {2}});

void BM_SolveDual(benchmark::State& state) {
    const auto data = data_for(state);
    const auto k = rbf_kernel_matrix(std::make_shared<const DistanceMatrix>(squared_distance_matrix(data.features())), 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(solve_dual(k, data.labels(), 1.0, SolverConfig{}));
}
BENCHMARK(BM_SolveDual)->ArgsProduct({{100, 400, 1600}, {2, 8}})->Unit(benchmark::kMillisecond);

void BM_SolveDualSimplified(benchmark::State& state) {
    const auto data = data_for(state);
    const auto k = rbf_kernel_matrix(std::make_shared<const DistanceMatrix>(squared_distance_matrix(data.features())), 1.0);
    SolverConfig config;
    config.variant = SmoVariant::simplified;
    for (auto _ : state) benchmark::DoNotOptimize(solve_dual(k, data.labels(), 1.0, config));
}
BENCHMARK(BM_SolveDualSimplified)->ArgsProduct({{100, 400}, {2}})->Unit(benchmark::kMillisecond);

void BM_TrainOksvm(benchmark::State& state) {
    const auto data = data_for(state);
    OksvmConfig config;
    config.gamma0 = 2.1;
    for (auto _ : state) benchmark::DoNotOptimize(train_oksvm(data, 1.0, config, SolverConfig{}));
}
BENCHMARK(BM_TrainOksvm)->ArgsProduct({{100, 400}, {2, 8}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
