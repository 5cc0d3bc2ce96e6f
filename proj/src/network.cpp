#include "hrdiag/network.hpp"

#include <charconv>
#include <cmath>
#include <random>
#include <stdexcept>

namespace hrdiag {

std::string to_string(const LayerSpec &layer)
{
	return std::to_string(layer.neurons) + "/" + std::string(to_string(layer.activation));
}

LayerSpec parse_layer_spec(std::string_view text)
{
	const auto slash = text.find('/');
	if (slash == std::string_view::npos)
		throw std::invalid_argument("layer '" + std::string(text)
		                            + "' must look like <neurons>/<activation>");
	const auto count = text.substr(0, slash);
	std::size_t neurons = 0;
	const auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), neurons);
	if (ec != std::errc{} || ptr != count.data() + count.size() || neurons == 0)
		throw std::invalid_argument("layer '" + std::string(text)
		                            + "' needs a positive neuron count");
	return {neurons, parse_activation(text.substr(slash + 1))};
}

void NetworkConfig::validate() const
{
	if (input_dim == 0)
		throw std::invalid_argument("network input dimension must be positive");
	if (layers.empty())
		throw std::invalid_argument("network needs at least an output layer");
	for (std::size_t k = 0; k < layers.size(); ++k)
		if (layers[k].neurons == 0)
			throw std::invalid_argument("layer " + std::to_string(k + 1) + " has zero neurons");
}

ParameterSet ParameterSet::zeros_like(const NetworkConfig &config)
{
	ParameterSet p;
	std::size_t fan_in = config.input_dim;
	for (const auto &layer : config.layers) {
		p.weights.emplace_back(layer.neurons, fan_in);
		p.biases.emplace_back(layer.neurons, 0.0);
		fan_in = layer.neurons;
	}
	return p;
}

std::size_t ParameterSet::size() const
{
	std::size_t n = 0;
	for (std::size_t k = 0; k < weights.size(); ++k)
		n += weights[k].data.size() + biases[k].size();
	return n;
}

bool ParameterSet::same_shape(const ParameterSet &other) const
{
	if (weights.size() != other.weights.size() || biases.size() != other.biases.size())
		return false;
	for (std::size_t k = 0; k < weights.size(); ++k) {
		if (weights[k].rows != other.weights[k].rows || weights[k].cols != other.weights[k].cols
		    || biases[k].size() != other.biases[k].size())
			return false;
	}
	return true;
}

bool ParameterSet::all_finite() const
{
	for (std::size_t k = 0; k < weights.size(); ++k) {
		for (double w : weights[k].data)
			if (!std::isfinite(w))
				return false;
		for (double b : biases[k])
			if (!std::isfinite(b))
				return false;
	}
	return true;
}

std::vector<double> ParameterSet::flatten() const
{
	std::vector<double> flat;
	flat.reserve(size());
	for (std::size_t k = 0; k < weights.size(); ++k) {
		flat.insert(flat.end(), weights[k].data.begin(), weights[k].data.end());
		flat.insert(flat.end(), biases[k].begin(), biases[k].end());
	}
	return flat;
}

void ParameterSet::assign_flat(std::span<const double> values)
{
	if (values.size() != size())
		throw std::invalid_argument("flat parameter vector has " + std::to_string(values.size())
		                            + " entries, expected " + std::to_string(size()));
	std::size_t i = 0;
	for (std::size_t k = 0; k < weights.size(); ++k) {
		for (double &w : weights[k].data)
			w = values[i++];
		for (double &b : biases[k])
			b = values[i++];
	}
}

Network init_network(const NetworkConfig &config)
{
	config.validate();
	Network net{config, ParameterSet::zeros_like(config)};
	std::mt19937_64 gen(config.seed);
	// 53 random bits -> [0, 1), then shift to [-0.5, 0.5)
	auto draw = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5; };
	for (std::size_t k = 0; k < net.params.weights.size(); ++k) {
		for (double &w : net.params.weights[k].data)
			w = draw();
		for (double &b : net.params.biases[k])
			b = draw();
	}
	return net;
}

ForwardResult forward(const Network &net, std::span<const double> input)
{
	if (input.size() != net.config.input_dim)
		throw std::invalid_argument("input has " + std::to_string(input.size())
		                            + " values, network expects "
		                            + std::to_string(net.config.input_dim));
	for (double v : input)
		if (!std::isfinite(v))
			throw std::invalid_argument("input contains a non-finite value");

	ForwardResult result;
	result.activations.reserve(net.config.layers.size());
	std::span<const double> previous = input;
	for (std::size_t k = 0; k < net.config.layers.size(); ++k) {
		const Matrix &w = net.params.weights[k];
		const auto &b = net.params.biases[k];
		const Activation act = net.config.layers[k].activation;
		std::vector<double> out(w.rows);
		for (std::size_t r = 0; r < w.rows; ++r) {
			double z = b[r];
			for (std::size_t c = 0; c < w.cols; ++c)
				z += w(r, c) * previous[c];
			out[r] = activate(act, z);
		}
		result.activations.push_back(std::move(out));
		previous = result.activations.back();
	}
	result.output = result.activations.back();
	return result;
}

double pattern_squared_error(std::span<const double> output, std::span<const double> target)
{
	if (output.size() != target.size())
		throw std::invalid_argument("output has " + std::to_string(output.size())
		                            + " components, target has " + std::to_string(target.size()));
	double sum = 0.0;
	for (std::size_t i = 0; i < output.size(); ++i) {
		const double d = output[i] - target[i];
		sum += d * d;
	}
	return sum;
}

double compute_mse(std::span<const std::vector<double>> outputs,
                   std::span<const std::vector<double>> targets)
{
	if (outputs.empty())
		throw std::invalid_argument("cannot compute MSE of an empty batch");
	if (outputs.size() != targets.size())
		throw std::invalid_argument("outputs and targets differ in length");
	const std::size_t width = outputs.front().size();
	double total = 0.0;
	for (std::size_t p = 0; p < outputs.size(); ++p) {
		if (outputs[p].size() != width)
			throw std::invalid_argument("ragged output vectors in batch");
		total += pattern_squared_error(outputs[p], targets[p]);
	}
	return total / static_cast<double>(outputs.size() * width);
}

} // namespace hrdiag
