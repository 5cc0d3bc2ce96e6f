#include "hrdiag/model_file.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hrdiag {

using nlohmann::json;

namespace {

json config_to_json(const NetworkConfig &config)
{
	json layers = json::array();
	for (const auto &l : config.layers)
		layers.push_back({{"neurons", l.neurons}, {"activation", std::string(to_string(l.activation))}});
	return {{"input_dim", config.input_dim}, {"layers", layers}, {"seed", config.seed}};
}

NetworkConfig config_from_json(const json &j)
{
	NetworkConfig config;
	config.input_dim = j.at("input_dim").get<std::size_t>();
	config.seed = j.at("seed").get<std::uint64_t>();
	for (const auto &l : j.at("layers"))
		config.layers.push_back(
		    {l.at("neurons").get<std::size_t>(), parse_activation(l.at("activation").get<std::string>())});
	config.validate();
	return config;
}

json params_to_json(const TrainParams &p)
{
	return {{"eta", p.eta},
	        {"momentum", p.momentum},
	        {"error_goal", p.error_goal},
	        {"max_epochs", p.max_epochs},
	        {"lr_increase", p.lr_increase},
	        {"lr_decrease", p.lr_decrease},
	        {"max_error_ratio", p.max_error_ratio},
	        {"adaptive", p.adaptive}};
}

TrainParams params_from_json(const json &j)
{
	TrainParams p;
	p.eta = j.at("eta").get<double>();
	p.momentum = j.at("momentum").get<double>();
	p.error_goal = j.at("error_goal").get<double>();
	p.max_epochs = j.at("max_epochs").get<int>();
	p.lr_increase = j.at("lr_increase").get<double>();
	p.lr_decrease = j.at("lr_decrease").get<double>();
	p.max_error_ratio = j.at("max_error_ratio").get<double>();
	p.adaptive = j.at("adaptive").get<bool>();
	return p;
}

} // namespace

std::string to_json(const ModelFile &model)
{
	json weights = json::array();
	json biases = json::array();
	for (std::size_t k = 0; k < model.network.params.weights.size(); ++k) {
		weights.push_back(model.network.params.weights[k].data);
		biases.push_back(model.network.params.biases[k]);
	}
	json rule;
	if (model.target_rule.is_surrogate())
		rule = {{"threshold", *model.target_rule.threshold},
		        {"success", model.target_rule.success},
		        {"failure", model.target_rule.failure}};
	else
		rule = "external";

	const json j = {{"schema_version", model.schema_version},
	                {"config", config_to_json(model.network.config)},
	                {"normalization",
	                 {{"offset", model.normalization.offset}, {"scale", model.normalization.scale}}},
	                {"train_params", params_to_json(model.train_params)},
	                {"weights", weights},
	                {"biases", biases},
	                {"final_train_mse", model.final_train_mse},
	                {"surrogate_target_rule", rule},
	                {"created_at", model.created_at}};
	return j.dump(2) + "\n";
}

ModelFile from_json(const std::string &text)
{
	ModelFile model;
	try {
		const json j = json::parse(text);
		model.schema_version = j.at("schema_version").get<int>();
		if (model.schema_version != model_schema_version)
			throw std::runtime_error("unsupported model schema version "
			                         + std::to_string(model.schema_version) + " (expected "
			                         + std::to_string(model_schema_version) + ")");
		model.network.config = config_from_json(j.at("config"));
		model.network.params = ParameterSet::zeros_like(model.network.config);
		const auto &weights = j.at("weights");
		const auto &biases = j.at("biases");
		const std::size_t n_layers = model.network.config.layers.size();
		if (weights.size() != n_layers || biases.size() != n_layers)
			throw std::runtime_error("model has " + std::to_string(weights.size())
			                         + " weight layers, configuration declares "
			                         + std::to_string(n_layers));
		for (std::size_t k = 0; k < n_layers; ++k) {
			auto w = weights[k].get<std::vector<double>>();
			auto b = biases[k].get<std::vector<double>>();
			if (w.size() != model.network.params.weights[k].data.size()
			    || b.size() != model.network.params.biases[k].size())
				throw std::runtime_error("layer " + std::to_string(k + 1)
				                         + " parameter count does not match configuration");
			model.network.params.weights[k].data = std::move(w);
			model.network.params.biases[k] = std::move(b);
		}
		if (!model.network.params.all_finite())
			throw std::runtime_error("model contains non-finite parameters");
		const auto &norm = j.at("normalization");
		model.normalization = {norm.at("offset").get<double>(), norm.at("scale").get<double>()};
		model.train_params = params_from_json(j.at("train_params"));
		model.final_train_mse = j.at("final_train_mse").get<double>();
		const auto &rule = j.at("surrogate_target_rule");
		if (rule.is_string()) {
			if (rule.get<std::string>() != "external")
				throw std::runtime_error("surrogate_target_rule must be an object or \"external\"");
			model.target_rule = TargetRule{};
		} else {
			model.target_rule = {rule.at("threshold").get<double>(), rule.at("success").get<double>(),
			                     rule.at("failure").get<double>()};
		}
		model.created_at = j.at("created_at").get<std::string>();
	} catch (const json::exception &e) {
		throw std::runtime_error(std::string("malformed model file: ") + e.what());
	} catch (const std::invalid_argument &e) {
		throw std::runtime_error(std::string("malformed model file: ") + e.what());
	}
	return model;
}

void save_model(const std::filesystem::path &path, const ModelFile &model)
{
	std::ofstream out(path, std::ios::binary);
	if (!out)
		throw std::runtime_error("cannot write model file '" + path.string() + "'");
	out << to_json(model);
	if (!out)
		throw std::runtime_error("failed writing model file '" + path.string() + "'");
}

ModelFile load_model(const std::filesystem::path &path)
{
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw std::runtime_error("cannot open model file '" + path.string() + "'");
	std::ostringstream buf;
	buf << in.rdbuf();
	try {
		return from_json(buf.str());
	} catch (const std::runtime_error &e) {
		throw std::runtime_error(path.string() + ": " + e.what());
	}
}

std::string utc_timestamp()
{
	const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
	std::tm tm{};
	gmtime_r(&now, &tm);
	char buf[32];
	std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
	return buf;
}

} // namespace hrdiag
