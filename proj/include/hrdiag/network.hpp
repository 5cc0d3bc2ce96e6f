#pragma once

#include "hrdiag/activation.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hrdiag {

struct LayerSpec {
	std::size_t neurons = 1;
	Activation activation = Activation::tansig;

	bool operator==(const LayerSpec &) const = default;
};

// "4/logsig" style label used by the toolbox tables and the CLI.
std::string to_string(const LayerSpec &layer);
LayerSpec parse_layer_spec(std::string_view text);

// Hidden layers followed by exactly one output layer.
struct NetworkConfig {
	std::size_t input_dim = 3;
	std::vector<LayerSpec> layers;
	std::uint64_t seed = 42;

	std::size_t output_dim() const { return layers.empty() ? 0 : layers.back().neurons; }

	// Throws std::invalid_argument on zero input_dim, empty layer list or a
	// zero-width layer.
	void validate() const;

	bool operator==(const NetworkConfig &) const = default;
};

// Dense row-major matrix, rows = fan_out, cols = fan_in.
struct Matrix {
	std::size_t rows = 0;
	std::size_t cols = 0;
	std::vector<double> data;

	Matrix() = default;
	Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

	double &operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
	double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

	bool operator==(const Matrix &) const = default;
};

// Weights and biases for every layer. Also used for gradients and momentum
// velocity, which share the network's shape.
struct ParameterSet {
	std::vector<Matrix> weights;
	std::vector<std::vector<double>> biases;

	static ParameterSet zeros_like(const NetworkConfig &config);

	std::size_t size() const;
	bool same_shape(const ParameterSet &other) const;
	bool all_finite() const;

	// Flat view in layer order: W0 row-major, b0, W1, b1, ...
	std::vector<double> flatten() const;
	void assign_flat(std::span<const double> values);

	bool operator==(const ParameterSet &) const = default;
};

using Gradients = ParameterSet;

struct Network {
	NetworkConfig config;
	ParameterSet params;

	bool operator==(const Network &) const = default;
};

// Weights and biases drawn uniformly from [-0.5, 0.5) by a seeded mt19937_64.
// The mapping from generator output to double is fixed, so the same seed gives
// the same network on every platform.
Network init_network(const NetworkConfig &config);

struct ForwardResult {
	std::vector<double> output;
	// One vector per layer, output layer last.
	std::vector<std::vector<double>> activations;
};

// Throws std::invalid_argument when input.size() != input_dim or the input
// is not finite.
ForwardResult forward(const Network &net, std::span<const double> input);

// Sum of squared residuals for one pattern; the building block of every MSE
// computed in the library.
double pattern_squared_error(std::span<const double> output, std::span<const double> target);

// Mean over all patterns and all output components of the squared error.
// Pattern sums are accumulated in order, so the result is reproducible.
double compute_mse(std::span<const std::vector<double>> outputs,
                   std::span<const std::vector<double>> targets);

} // namespace hrdiag
