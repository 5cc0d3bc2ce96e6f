#pragma once

#include "hrdiag/execution.hpp"
#include "hrdiag/network.hpp"

#include <span>
#include <vector>

namespace hrdiag {

struct Sample {
	std::vector<double> input;
	std::vector<double> target;
};

struct GradientResult {
	Gradients gradients;
	double mse = 0.0;
};

// Batches at least this large go through the OpenMP kernel when the caller
// does not choose explicitly.
inline constexpr std::size_t parallel_min_batch = 256;

// Gradient of the batch MSE with respect to every weight and bias, plus the
// batch MSE itself. Per-pattern contributions are reduced in pattern order,
// so serial and parallel execution agree bit-for-bit.
GradientResult backprop_gradients(const Network &net, std::span<const Sample> batch,
                                  Execution exec);
GradientResult backprop_gradients(const Network &net, std::span<const Sample> batch);

// Batch MSE without gradients. Same reduction order as backprop_gradients.
double batch_mse(const Network &net, std::span<const Sample> batch, Execution exec);
double batch_mse(const Network &net, std::span<const Sample> batch);

} // namespace hrdiag
