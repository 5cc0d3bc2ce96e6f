#include "hrdiag/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hrdiag {

namespace {

void require(bool ok, const std::string &message)
{
	if (!ok)
		throw std::invalid_argument(message);
}

} // namespace

void TrainParams::validate() const
{
	require(std::isfinite(eta) && eta > 0.0, "learning rate must be a positive finite number");
	require(std::isfinite(momentum) && momentum >= 0.0 && momentum < 1.0,
	        "momentum must lie in [0, 1)");
	require(std::isfinite(error_goal) && error_goal > 0.0, "error goal must be positive");
	require(max_epochs >= 0, "epoch budget must not be negative");
	require(std::isfinite(lr_increase) && lr_increase > 1.0, "lr_increase must exceed 1");
	require(std::isfinite(lr_decrease) && lr_decrease > 0.0 && lr_decrease < 1.0,
	        "lr_decrease must lie in (0, 1)");
	require(std::isfinite(max_error_ratio) && max_error_ratio > 1.0,
	        "max_error_ratio must exceed 1");
}

std::string_view to_string(StopReason reason)
{
	return reason == StopReason::goal_reached ? "goal_reached" : "epoch_budget_exhausted";
}

std::optional<double> TrainingTrace::final_mse() const
{
	if (epochs.empty())
		return std::nullopt;
	return epochs.back().mse;
}

std::optional<double> TrainingTrace::min_accepted_mse() const
{
	std::optional<double> best;
	for (const auto &e : epochs)
		if (e.accepted && (!best || e.mse < *best))
			best = e.mse;
	return best;
}

std::vector<double> TrainingTrace::accepted_mse() const
{
	std::vector<double> out;
	for (const auto &e : epochs)
		if (e.accepted)
			out.push_back(e.mse);
	return out;
}

StepDecision decide_step(const TrainParams &params, double current_lr,
                         std::optional<double> previous_mse, double current_mse,
                         double candidate_mse)
{
	if (!std::isfinite(candidate_mse))
		return {false, current_lr * params.lr_decrease};
	if (!params.adaptive)
		return {true, current_lr};
	if (previous_mse && candidate_mse > params.max_error_ratio * *previous_mse)
		return {false, current_lr * params.lr_decrease};
	const double reference = previous_mse ? *previous_mse : current_mse;
	if (candidate_mse < reference)
		return {true, current_lr * params.lr_increase};
	return {true, current_lr};
}

EpochResult train_epoch(const Network &net, const ParameterSet &velocity,
                        std::span<const Sample> batch, const TrainParams &params,
                        double current_lr, std::optional<double> previous_mse)
{
	if (previous_mse && !(*previous_mse >= 0.0))
		throw std::invalid_argument("previous MSE must be non-negative");
	if (!velocity.same_shape(net.params))
		throw std::invalid_argument("velocity shape does not match network");

	const GradientResult grad = backprop_gradients(net, batch);

	EpochResult result{net, velocity, current_lr, 0.0, 0.0, false};
	ParameterSet &step = result.velocity;
	for (std::size_t k = 0; k < step.weights.size(); ++k) {
		auto &vw = step.weights[k].data;
		const auto &gw = grad.gradients.weights[k].data;
		auto &w = result.network.params.weights[k].data;
		for (std::size_t i = 0; i < vw.size(); ++i) {
			vw[i] = params.momentum * vw[i] - current_lr * gw[i];
			w[i] += vw[i];
		}
		auto &vb = step.biases[k];
		const auto &gb = grad.gradients.biases[k];
		auto &b = result.network.params.biases[k];
		for (std::size_t i = 0; i < vb.size(); ++i) {
			vb[i] = params.momentum * vb[i] - current_lr * gb[i];
			b[i] += vb[i];
		}
	}

	result.candidate_mse = batch_mse(result.network, batch);
	const StepDecision decision =
	    decide_step(params, current_lr, previous_mse, grad.mse, result.candidate_mse);
	result.accepted = decision.accepted;
	result.learning_rate = decision.learning_rate;
	if (decision.accepted) {
		result.mse = result.candidate_mse;
	} else {
		result.network = net;
		result.velocity = ParameterSet::zeros_like(net.config);
		result.mse = previous_mse ? *previous_mse : grad.mse;
	}
	return result;
}

TrainResult train(const Network &net, std::span<const Sample> batch, const TrainParams &params)
{
	params.validate();
	if (batch.empty())
		throw std::invalid_argument("training batch is empty");

	TrainResult out{net, {}};
	ParameterSet velocity = ParameterSet::zeros_like(net.config);
	double lr = params.eta;
	std::optional<double> previous;
	out.trace.epochs.reserve(static_cast<std::size_t>(params.max_epochs));

	for (int epoch = 1; epoch <= params.max_epochs; ++epoch) {
		EpochResult r = train_epoch(out.network, velocity, batch, params, lr, previous);
		out.trace.epochs.push_back({epoch, r.mse, lr, r.accepted});
		out.network = std::move(r.network);
		velocity = std::move(r.velocity);
		lr = r.learning_rate;
		previous = r.mse;
		if (r.accepted && r.mse <= params.error_goal) {
			out.trace.stopping_reason = StopReason::goal_reached;
			return out;
		}
	}
	out.trace.stopping_reason = StopReason::epoch_budget_exhausted;
	return out;
}

double evaluate(const Network &net, std::span<const Sample> batch)
{
	return batch_mse(net, batch);
}

TrainingTrace replicate_paper_validation(const Network &trained, std::span<const Sample> holdout,
                                         const TrainParams &params)
{
	return train(trained, holdout, params).trace;
}

double accuracy_from_mse(double mse)
{
	return std::max(0.0, 100.0 - mse);
}

} // namespace hrdiag
