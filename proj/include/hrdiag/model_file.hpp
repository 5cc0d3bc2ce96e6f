#pragma once

#include "hrdiag/dataset.hpp"
#include "hrdiag/network.hpp"
#include "hrdiag/trainer.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace hrdiag {

inline constexpr int model_schema_version = 1;

// How training targets were obtained. nullopt threshold means the targets
// came from the data file ("external").
struct TargetRule {
	std::optional<double> threshold;
	double success = success_target;
	double failure = failure_target;

	bool is_surrogate() const { return threshold.has_value(); }
	bool operator==(const TargetRule &) const = default;
};

struct ModelFile {
	int schema_version = model_schema_version;
	Network network;
	Normalization normalization;
	TrainParams train_params;
	double final_train_mse = 0.0;
	TargetRule target_rule;
	std::string created_at;

	bool operator==(const ModelFile &) const = default;
};

// JSON text; doubles are printed shortest-round-trip, so
// to_json(from_json(to_json(m))) == to_json(m).
std::string to_json(const ModelFile &model);
// Throws std::runtime_error on malformed JSON, an unknown schema version or
// weights that do not match the stored configuration.
ModelFile from_json(const std::string &text);

void save_model(const std::filesystem::path &path, const ModelFile &model);
ModelFile load_model(const std::filesystem::path &path);

// Current UTC time as ISO-8601 text.
std::string utc_timestamp();

} // namespace hrdiag
