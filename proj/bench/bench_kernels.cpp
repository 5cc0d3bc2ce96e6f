// Serial reference vs OpenMP kernels.

#include "hrdiag/backprop.hpp"
#include "hrdiag/dataset.hpp"
#include "hrdiag/sweep.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace hrdiag;

namespace {

std::vector<Sample> synthetic_batch(std::size_t n)
{
	std::mt19937_64 gen(1);
	std::uniform_real_distribution<double> v(-1.0, 1.0);
	std::vector<Sample> batch(n);
	for (auto &s : batch)
		s = {{v(gen), v(gen), v(gen)}, {0.9 * v(gen)}};
	return batch;
}

Network bench_network()
{
	return init_network({3, {{8, Activation::logsig}, {8, Activation::tansig}, {1, Activation::tansig}}, 42});
}

void BM_backprop(benchmark::State &state, Execution exec)
{
	const Network net = bench_network();
	const auto batch = synthetic_batch(static_cast<std::size_t>(state.range(0)));
	for (auto _ : state)
		benchmark::DoNotOptimize(backprop_gradients(net, batch, exec));
	state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_batch_mse(benchmark::State &state, Execution exec)
{
	const Network net = bench_network();
	const auto batch = synthetic_batch(static_cast<std::size_t>(state.range(0)));
	for (auto _ : state)
		benchmark::DoNotOptimize(batch_mse(net, batch, exec));
	state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_sweep(benchmark::State &state, Execution exec)
{
	Dataset d = load_embedded();
	d.training = assign_surrogate_targets(d.training);
	d.testing = assign_surrogate_targets(d.testing);
	SweepConfig config = canonical_grid();
	config.seeds = {1, 2, 3, 4};
	for (auto _ : state)
		benchmark::DoNotOptimize(run_sweep(config, d, TrainParams{}, exec));
}

} // namespace

BENCHMARK_CAPTURE(BM_backprop, serial, Execution::serial)->Arg(52)->Arg(1024)->Arg(16384);
BENCHMARK_CAPTURE(BM_backprop, parallel, Execution::parallel)->Arg(52)->Arg(1024)->Arg(16384);
BENCHMARK_CAPTURE(BM_batch_mse, serial, Execution::serial)->Arg(52)->Arg(16384);
BENCHMARK_CAPTURE(BM_batch_mse, parallel, Execution::parallel)->Arg(52)->Arg(16384);
BENCHMARK_CAPTURE(BM_sweep, serial, Execution::serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_sweep, parallel, Execution::parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
