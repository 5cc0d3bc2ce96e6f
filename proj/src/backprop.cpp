#include "hrdiag/backprop.hpp"

#include <omp.h>

#include <stdexcept>

namespace hrdiag {

namespace {

void check_batch(const Network &net, std::span<const Sample> batch)
{
	if (batch.empty())
		throw std::invalid_argument("batch is empty");
	const std::size_t out_dim = net.config.output_dim();
	for (std::size_t p = 0; p < batch.size(); ++p) {
		if (batch[p].target.size() != out_dim)
			throw std::invalid_argument("pattern " + std::to_string(p + 1) + " target has "
			                            + std::to_string(batch[p].target.size())
			                            + " values, network outputs " + std::to_string(out_dim));
	}
}

// Offsets of each layer's weights and biases inside the flat parameter
// layout used by ParameterSet::flatten().
struct FlatLayout {
	std::vector<std::size_t> weights;
	std::vector<std::size_t> biases;
	std::size_t size = 0;

	explicit FlatLayout(const Network &net)
	{
		for (std::size_t k = 0; k < net.params.weights.size(); ++k) {
			weights.push_back(size);
			size += net.params.weights[k].data.size();
			biases.push_back(size);
			size += net.params.biases[k].size();
		}
	}
};

// Adds the unscaled gradient contribution of one pattern,
// sum_k (o_k - t_k) do_k/dtheta, into acc and returns the pattern's squared error.
double add_pattern_contribution(const Network &net, const FlatLayout &layout, const Sample &sample,
                                std::span<double> acc)
{
	const ForwardResult fwd = forward(net, sample.input);
	const auto &layers = net.config.layers;
	const std::size_t last = layers.size() - 1;

	std::vector<double> delta(fwd.output.size());
	for (std::size_t i = 0; i < delta.size(); ++i)
		delta[i] = (fwd.output[i] - sample.target[i])
		           * derivative_from_output(layers[last].activation, fwd.output[i]);

	for (std::size_t k = last + 1; k-- > 0;) {
		const std::span<const double> prev = k == 0 ? std::span<const double>(sample.input)
		                                            : std::span<const double>(fwd.activations[k - 1]);
		const Matrix &w = net.params.weights[k];
		double *gw = acc.data() + layout.weights[k];
		double *gb = acc.data() + layout.biases[k];
		for (std::size_t r = 0; r < w.rows; ++r) {
			for (std::size_t c = 0; c < w.cols; ++c)
				gw[r * w.cols + c] += delta[r] * prev[c];
			gb[r] += delta[r];
		}
		if (k == 0)
			break;
		const Activation prev_act = layers[k - 1].activation;
		std::vector<double> prev_delta(w.cols, 0.0);
		for (std::size_t c = 0; c < w.cols; ++c) {
			double s = 0.0;
			for (std::size_t r = 0; r < w.rows; ++r)
				s += w(r, c) * delta[r];
			prev_delta[c] = s * derivative_from_output(prev_act, prev[c]);
		}
		delta = std::move(prev_delta);
	}
	return pattern_squared_error(fwd.output, sample.target);
}

GradientResult finish(std::vector<double> &total, double squared_error, const Network &net, std::size_t n)
{
	const double count = static_cast<double>(n * net.config.output_dim());
	const double factor = 2.0 / count;
	for (double &g : total)
		g *= factor;
	GradientResult result{ParameterSet::zeros_like(net.config), squared_error / count};
	result.gradients.assign_flat(total);
	return result;
}

GradientResult backprop_serial(const Network &net, std::span<const Sample> batch)
{
	const FlatLayout layout(net);
	std::vector<double> total(layout.size, 0.0);
	double squared_error = 0.0;
	for (const Sample &s : batch)
		squared_error += add_pattern_contribution(net, layout, s, total);
	return finish(total, squared_error, net, batch.size());
}

GradientResult backprop_parallel(const Network &net, std::span<const Sample> batch)
{
	const FlatLayout layout(net);
	const std::size_t width = layout.size;
	const auto n = static_cast<std::ptrdiff_t>(batch.size());
	// one row of contributions per pattern, reduced below in pattern order
	std::vector<double> parts(batch.size() * width, 0.0);
	std::vector<double> errors(batch.size(), 0.0);
	bool failed = false;
	std::string message;

#pragma omp parallel for schedule(static)
	for (std::ptrdiff_t p = 0; p < n; ++p) {
		try {
			const auto row = static_cast<std::size_t>(p);
			errors[row] = add_pattern_contribution(
			    net, layout, batch[row], std::span<double>(parts.data() + row * width, width));
		} catch (const std::exception &e) {
#pragma omp critical(hrdiag_backprop_error)
			{
				if (!failed) {
					failed = true;
					message = e.what();
				}
			}
		}
	}
	if (failed)
		throw std::invalid_argument(message);

	std::vector<double> total(width, 0.0);
	double squared_error = 0.0;
	for (std::size_t p = 0; p < batch.size(); ++p) {
		const double *row = parts.data() + p * width;
		for (std::size_t i = 0; i < width; ++i)
			total[i] += row[i];
		squared_error += errors[p];
	}
	return finish(total, squared_error, net, batch.size());
}

double mse_serial(const Network &net, std::span<const Sample> batch)
{
	double squared_error = 0.0;
	for (const Sample &s : batch)
		squared_error += pattern_squared_error(forward(net, s.input).output, s.target);
	return squared_error / static_cast<double>(batch.size() * net.config.output_dim());
}

double mse_parallel(const Network &net, std::span<const Sample> batch)
{
	const auto n = static_cast<std::ptrdiff_t>(batch.size());
	std::vector<double> errors(batch.size(), 0.0);
	bool failed = false;
	std::string message;

#pragma omp parallel for schedule(static)
	for (std::ptrdiff_t p = 0; p < n; ++p) {
		try {
			errors[p] = pattern_squared_error(forward(net, batch[p].input).output, batch[p].target);
		} catch (const std::exception &e) {
#pragma omp critical(hrdiag_mse_error)
			{
				if (!failed) {
					failed = true;
					message = e.what();
				}
			}
		}
	}
	if (failed)
		throw std::invalid_argument(message);

	double squared_error = 0.0;
	for (double e : errors)
		squared_error += e;
	return squared_error / static_cast<double>(batch.size() * net.config.output_dim());
}

Execution pick(std::size_t batch_size)
{
	// nested regions would run single-threaded anyway, skip the buffer overhead
	if (batch_size < parallel_min_batch || omp_in_parallel())
		return Execution::serial;
	return Execution::parallel;
}

} // namespace

GradientResult backprop_gradients(const Network &net, std::span<const Sample> batch, Execution exec)
{
	check_batch(net, batch);
	GradientResult result = exec == Execution::parallel ? backprop_parallel(net, batch)
	                                                    : backprop_serial(net, batch);
	if (!result.gradients.same_shape(net.params))
		throw std::logic_error("gradient shape does not match network");
	return result;
}

GradientResult backprop_gradients(const Network &net, std::span<const Sample> batch)
{
	return backprop_gradients(net, batch, pick(batch.size()));
}

double batch_mse(const Network &net, std::span<const Sample> batch, Execution exec)
{
	check_batch(net, batch);
	return exec == Execution::parallel ? mse_parallel(net, batch) : mse_serial(net, batch);
}

double batch_mse(const Network &net, std::span<const Sample> batch)
{
	return batch_mse(net, batch, pick(batch.size()));
}

} // namespace hrdiag
