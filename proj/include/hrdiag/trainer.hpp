#pragma once

#include "hrdiag/backprop.hpp"
#include "hrdiag/network.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace hrdiag {

// Full-batch gradient descent with momentum and an adaptive learning rate
// (toolbox traingda/learngdm semantics).
struct TrainParams {
	double eta = 0.01;           // initial learning rate
	double momentum = 0.9;       // [0, 1)
	double error_goal = 0.01;    // stop once an accepted epoch reaches this MSE
	int max_epochs = 1000;
	double lr_increase = 1.05;   // applied on strict improvement
	double lr_decrease = 0.7;    // applied on rejection
	double max_error_ratio = 1.04;
	bool adaptive = true;

	// Throws std::invalid_argument describing the first bad field.
	void validate() const;

	bool operator==(const TrainParams &) const = default;
};

struct EpochRecord {
	int epoch = 0;            // 1-based
	double mse = 0.0;         // MSE of the network after this epoch
	double learning_rate = 0; // rate used for this epoch's step
	bool accepted = false;

	bool operator==(const EpochRecord &) const = default;
};

enum class StopReason { goal_reached, epoch_budget_exhausted };

std::string_view to_string(StopReason reason);

struct TrainingTrace {
	std::vector<EpochRecord> epochs;
	StopReason stopping_reason = StopReason::epoch_budget_exhausted;

	// MSE of the last epoch, or nullopt for an empty trace.
	std::optional<double> final_mse() const;
	// Smallest MSE over accepted epochs.
	std::optional<double> min_accepted_mse() const;
	std::vector<double> accepted_mse() const;

	bool operator==(const TrainingTrace &) const = default;
};

// Accept/reject and learning-rate decision for one candidate step.
// previous_mse is nullopt on the first epoch, where no rejection test applies;
// current_mse is the error of the network before the step.
struct StepDecision {
	bool accepted = true;
	double learning_rate = 0.0;
};

StepDecision decide_step(const TrainParams &params, double current_lr,
                         std::optional<double> previous_mse, double current_mse,
                         double candidate_mse);

struct EpochResult {
	Network network;
	ParameterSet velocity;
	double learning_rate = 0.0; // rate for the next epoch
	double mse = 0.0;           // previous MSE on rejection, candidate MSE otherwise
	double candidate_mse = 0.0;
	bool accepted = false;
};

// One full-batch step: delta = momentum * velocity - lr * gradient. Rejected
// steps leave the network untouched and zero the velocity.
EpochResult train_epoch(const Network &net, const ParameterSet &velocity,
                        std::span<const Sample> batch, const TrainParams &params,
                        double current_lr, std::optional<double> previous_mse);

struct TrainResult {
	Network network;
	TrainingTrace trace;
};

// Iterates train_epoch until an accepted epoch meets the error goal or the
// epoch budget runs out. Deterministic in (net, batch, params).
TrainResult train(const Network &net, std::span<const Sample> batch, const TrainParams &params);

// MSE of the network on a batch; no parameter updates.
double evaluate(const Network &net, std::span<const Sample> batch);

// Continues the training loop on a holdout set starting from trained weights
// and returns the error trajectory. Compare trace.min_accepted_mse() with the
// training minimum to reproduce the toolbox-era validation check.
TrainingTrace replicate_paper_validation(const Network &trained, std::span<const Sample> holdout,
                                         const TrainParams &params);

// Accuracy figure used by the original study: 100 - MSE, floored at 0.
double accuracy_from_mse(double mse);

} // namespace hrdiag
