// hrdiag: score questionnaires, train, evaluate, sweep and predict with the
// HR success/failure network.

#include "hrdiag/dataset.hpp"
#include "hrdiag/model_file.hpp"
#include "hrdiag/questionnaire.hpp"
#include "hrdiag/sweep.hpp"
#include "hrdiag/trainer.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace hrdiag;

namespace {

struct GlobalOptions {
	std::uint64_t seed = 42;
	bool embedded = false;
	std::string data;
	bool quiet = false;
};

struct TrainOptions {
	std::vector<std::string> hidden{"4/logsig"};
	std::string output_layer = "1/tansig";
	TrainParams params;
	bool no_adaptive = false;
	double threshold = default_target_threshold;
	std::string model_path;
	std::string trace_csv;
};

struct EvalOptions {
	std::string model_path;
	std::string split = "test";
	bool paper_validation = false;
	int max_epochs = 50;
};

struct SweepOptions {
	std::string seeds = "1..10";
	std::string csv_path;
	double threshold = default_target_threshold;
};

struct PredictOptions {
	std::string model_path;
	std::string input;
	std::string questionnaire;
};

struct ScoreOptions {
	std::string path;
	bool list_factors = false;
};

constexpr const char *surrogate_caveat =
    "note: targets are surrogate labels (mean of x1..x3 >= %g -> success +0.9, else failure -0.9); "
    "the study's true outcomes were never published\n";

std::string fixed(double v, int decimals)
{
	char buf[64];
	std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
	return buf;
}

// "MSE: x" and "accuracy: y%" lines where y is computed from x as printed.
void print_mse_accuracy(const std::string &prefix, double mse)
{
	const std::string mse_text = fixed(mse, 6);
	const double printed = std::stod(mse_text);
	std::printf("%sMSE: %s\n", prefix.c_str(), mse_text.c_str());
	std::printf("%saccuracy: %s%% (100 - MSE)\n", prefix.c_str(), fixed(accuracy_from_mse(printed), 6).c_str());
}

std::vector<LayerSpec> parse_layers(const std::vector<std::string> &items)
{
	std::vector<LayerSpec> layers;
	for (const auto &item : items) {
		std::stringstream ss(item);
		std::string part;
		while (std::getline(ss, part, ','))
			if (!part.empty())
				layers.push_back(parse_layer_spec(part));
	}
	return layers;
}

std::vector<std::uint64_t> parse_seeds(const std::string &text)
{
	std::vector<std::uint64_t> seeds;
	const auto dots = text.find("..");
	try {
		if (dots != std::string::npos) {
			const auto lo = std::stoull(text.substr(0, dots));
			const auto hi = std::stoull(text.substr(dots + 2));
			if (hi < lo)
				throw std::invalid_argument("empty range");
			for (auto s = lo; s <= hi; ++s)
				seeds.push_back(s);
		} else {
			std::stringstream ss(text);
			std::string part;
			while (std::getline(ss, part, ','))
				seeds.push_back(std::stoull(part));
		}
	} catch (const std::logic_error &) {
		throw std::invalid_argument("seeds must be a range like 1..10 or a list like 1,2,3");
	}
	if (seeds.empty())
		throw std::invalid_argument("no seeds given");
	return seeds;
}

void print_warnings(const GlobalOptions &g, const std::vector<std::string> &warnings)
{
	if (g.quiet)
		return;
	for (const auto &w : warnings)
		std::printf("warning: %s\n", w.c_str());
}

// Training/testing patterns with targets, plus whether they are surrogate.
struct LoadedData {
	Dataset dataset;
	bool surrogate = true;
	std::string description;
};

LoadedData load_training_data(const GlobalOptions &g, double threshold)
{
	LoadedData out;
	if (!g.data.empty()) {
		const bool targets = csv_has_target_column(g.data);
		CsvPatterns csv = load_csv(g.data, targets);
		print_warnings(g, csv.warnings);
		auto patterns = targets ? csv.patterns : assign_surrogate_targets(csv.patterns, threshold);
		auto [train, test] = split_70_30(patterns, g.seed);
		out.dataset = {std::move(train), std::move(test), Normalization{}};
		out.surrogate = !targets;
		out.description = g.data + " (" + std::to_string(out.dataset.training.size()) + " training, "
		                  + std::to_string(out.dataset.testing.size()) + " testing after seeded 70/30 split)";
	} else {
		out.dataset = load_embedded();
		out.dataset.training = assign_surrogate_targets(out.dataset.training, threshold);
		out.dataset.testing = assign_surrogate_targets(out.dataset.testing, threshold);
		out.description = "embedded (52 training, 23 testing)";
	}
	return out;
}

int cmd_train(const GlobalOptions &g, TrainOptions o)
{
	o.params.adaptive = !o.no_adaptive;
	o.params.validate();
	NetworkConfig config{3, parse_layers(o.hidden), g.seed};
	config.layers.push_back(parse_layer_spec(o.output_layer));
	config.validate();
	if (config.output_dim() != 1)
		throw std::invalid_argument("the diagnostic model needs a single output neuron");

	const LoadedData data = load_training_data(g, o.threshold);
	const auto samples = to_samples(data.dataset.training, data.dataset.normalization);

	const Network initial = init_network(config);
	const TrainResult result = train(initial, samples, o.params);
	const double final_mse = result.trace.final_mse().value_or(evaluate(result.network, samples));
	if (!std::isfinite(final_mse) || !result.network.params.all_finite())
		throw std::runtime_error("training diverged to non-finite values");

	std::string label;
	for (const auto &l : config.layers)
		label += (label.empty() ? "" : " + ") + to_string(l);

	std::printf("data: %s\n", data.description.c_str());
	if (data.surrogate)
		std::printf(surrogate_caveat, o.threshold);
	std::printf("configuration: %s, seed %llu\n", label.c_str(), static_cast<unsigned long long>(g.seed));
	if (o.params.max_epochs == 0)
		std::printf("zero-epoch run: model holds the initial weights\n");
	std::printf("final epoch: %zu\n", result.trace.epochs.size());
	std::printf("stopping reason: %s\n", std::string(to_string(result.trace.stopping_reason)).c_str());
	print_mse_accuracy("", final_mse);

	ModelFile model;
	model.network = result.network;
	model.normalization = data.dataset.normalization;
	model.train_params = o.params;
	model.final_train_mse = final_mse;
	if (data.surrogate)
		model.target_rule.threshold = o.threshold;
	model.created_at = utc_timestamp();
	save_model(o.model_path, model);
	std::printf("model written to %s\n", o.model_path.c_str());

	if (!o.trace_csv.empty()) {
		std::ofstream out(o.trace_csv);
		if (!out)
			throw std::runtime_error("cannot write trace file '" + o.trace_csv + "'");
		out << "epoch,mse,learning_rate,accepted\n";
		for (const auto &e : result.trace.epochs) {
			char line[128];
			std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%d\n", e.epoch, e.mse, e.learning_rate,
			              e.accepted ? 1 : 0);
			out << line;
		}
		std::printf("trace written to %s\n", o.trace_csv.c_str());
	}
	return 0;
}

int cmd_eval(const GlobalOptions &g, const EvalOptions &o)
{
	const ModelFile model = load_model(o.model_path);
	std::vector<Pattern> patterns;
	bool surrogate = false;
	double threshold = model.target_rule.threshold.value_or(default_target_threshold);

	if (!g.data.empty()) {
		if (!csv_has_target_column(g.data))
			throw std::runtime_error("targets required: " + g.data + " has no target column");
		CsvPatterns csv = load_csv(g.data, true);
		print_warnings(g, csv.warnings);
		if (o.split == "all") {
			patterns = std::move(csv.patterns);
		} else {
			auto [train, test] = split_70_30(csv.patterns, g.seed);
			patterns = o.split == "train" ? std::move(train) : std::move(test);
		}
	} else {
		const Dataset d = load_embedded();
		if (o.split == "train")
			patterns = d.training;
		else if (o.split == "test")
			patterns = d.testing;
		else {
			patterns = d.training;
			patterns.insert(patterns.end(), d.testing.begin(), d.testing.end());
		}
		patterns = assign_surrogate_targets(patterns, threshold);
		surrogate = true;
	}

	const auto samples = to_samples(patterns, model.normalization);
	const double mse = evaluate(model.network, samples);

	std::size_t tp = 0, fn = 0, fp = 0, tn = 0;
	for (const auto &s : samples) {
		const bool predicted = forward(model.network, s.input).output[0] >= 0.0;
		const bool actual = s.target[0] >= 0.0;
		(predicted ? (actual ? tp : fp) : (actual ? fn : tn))++;
	}

	std::printf("patterns: %zu (%s split)\n", samples.size(), o.split.c_str());
	if (surrogate)
		std::printf(surrogate_caveat, threshold);
	print_mse_accuracy("", mse);
	std::printf("confusion: success->success %zu, success->failure %zu, failure->success %zu, "
	            "failure->failure %zu\n",
	            tp, fn, fp, tn);

	if (o.paper_validation) {
		TrainParams params = model.train_params;
		params.max_epochs = o.max_epochs;
		params.validate();
		const TrainingTrace trace = replicate_paper_validation(model.network, samples, params);
		for (const auto &e : trace.epochs)
			std::printf("error=%.6f no.of epoches=%d\n", e.mse, e.epoch);
		if (const auto test_min = trace.min_accepted_mse()) {
			std::printf("error_min testing: %s, error_min training: %s, testing below training: %s\n",
			            fixed(*test_min, 6).c_str(), fixed(model.final_train_mse, 6).c_str(),
			            *test_min < model.final_train_mse ? "yes" : "no");
			print_mse_accuracy("validation ", *test_min);
		}
	}
	return 0;
}

int cmd_sweep(const GlobalOptions &g, const SweepOptions &o)
{
	SweepConfig config = canonical_grid();
	config.seeds = parse_seeds(o.seeds);
	const LoadedData data = load_training_data(g, o.threshold);
	const auto rows = run_sweep(config, data.dataset, TrainParams{});

	std::printf("data: %s\n", data.description.c_str());
	if (data.surrogate)
		std::printf(surrogate_caveat, o.threshold);
	std::printf("seeds: %zu, MSE is final training MSE; test MSE on the held-out split\n",
	            config.seeds.size());
	std::fputs(render_table(rows).c_str(), stdout);

	if (!o.csv_path.empty()) {
		std::ofstream out(o.csv_path);
		if (!out)
			throw std::runtime_error("cannot write csv file '" + o.csv_path + "'");
		out << render_csv(rows);
		std::printf("csv written to %s\n", o.csv_path.c_str());
	}
	for (const auto &row : rows)
		if (row.failed())
			return 1;
	return 0;
}

std::array<double, 3> parse_input_triple(const std::string &text)
{
	std::array<double, 3> x{};
	std::stringstream ss(text);
	std::string part;
	std::size_t i = 0;
	while (std::getline(ss, part, ',')) {
		if (i == 3)
			throw std::invalid_argument("input must be exactly 3 comma-separated values");
		std::size_t used = 0;
		try {
			x[i] = std::stod(part, &used);
		} catch (const std::logic_error &) {
			used = 0;
		}
		if (used != part.size() || part.empty() || !std::isfinite(x[i]))
			throw std::invalid_argument("malformed input value '" + part + "'");
		++i;
	}
	if (i != 3)
		throw std::invalid_argument("input must be exactly 3 comma-separated values");
	return x;
}

int cmd_predict(const GlobalOptions &g, const PredictOptions &o)
{
	const ModelFile model = load_model(o.model_path);
	if (model.network.config.input_dim != 3)
		throw std::runtime_error("model expects " + std::to_string(model.network.config.input_dim)
		                         + " inputs, predictions take 3");

	std::array<double, 3> x{};
	if (!o.questionnaire.empty()) {
		x = aggregate_questionnaire(load_questionnaire(o.questionnaire)).features();
	} else if (!o.input.empty()) {
		x = parse_input_triple(o.input);
	} else {
		throw std::invalid_argument("give --input x1,x2,x3 or --questionnaire <csv>");
	}
	const char *names[] = {"strategic", "tactical", "operational"};
	for (std::size_t i = 0; i < 3; ++i) {
		if (x[i] < input_min || x[i] > input_max)
			throw std::out_of_range(std::string(names[i]) + " value " + fixed(x[i], 3)
			                        + " outside the accepted range [-1, 5]");
		if (x[i] < 1.0 && !g.quiet)
			std::printf("warning: %s value %s is below the Likert floor of 1\n", names[i], fixed(x[i], 3).c_str());
	}

	const std::vector<double> input{model.normalization.apply(x[0]), model.normalization.apply(x[1]),
	                                 model.normalization.apply(x[2])};
	const double raw = forward(model.network, input).output[0];
	std::printf("x1=%.3f x2=%.3f x3=%.3f\n", x[0], x[1], x[2]);
	std::printf("raw output: %.17g\n", raw);
	std::printf("diagnosis: %s\n", raw >= 0.0 ? "success" : "failure");
	print_mse_accuracy("model training ", model.final_train_mse);
	if (model.target_rule.is_surrogate())
		std::printf(surrogate_caveat, *model.target_rule.threshold);
	return 0;
}

int cmd_score(const GlobalOptions &, const ScoreOptions &o)
{
	if (o.list_factors) {
		write_factor_table(std::cout);
		return 0;
	}
	if (o.path.empty())
		throw std::invalid_argument("give a questionnaire csv or --list-factors");
	const QuestionnaireResponse response = load_questionnaire(o.path);
	const GroupMeans means = group_means(response);
	std::printf("%-38s %-12s %s\n", "factor", "group", "score");
	for (const auto &f : factors())
		std::printf("%-38s %-12s %.3f\n", std::string(f.id).c_str(), std::string(to_string(f.group)).c_str(),
		            response.scores.find(f.id)->second);
	std::printf("\n%-12s %s\n", "group", "mean");
	std::printf("%-12s %.3f\n%-12s %.3f\n%-12s %.3f\n", "strategic", means.strategic, "tactical",
	            means.tactical, "operational", means.operational);
	std::printf("x1=%.3f x2=%.3f x3=%.3f\n", means.strategic, means.tactical, means.operational);
	return 0;
}

} // namespace

int main(int argc, char **argv)
{
	CLI::App app{"HR success/failure diagnosis with a small feedforward network"};
	app.require_subcommand(1);

	GlobalOptions g;
	app.add_option("--seed", g.seed, "Seed for weight init and data splits")->capture_default_str();
	auto *embedded = app.add_flag("--embedded", g.embedded, "Use the built-in 52/23 tables (default)");
	app.add_option("--data", g.data, "CSV with strategic,tactical,operational[,target]")
	    ->excludes(embedded);
	app.add_flag("--quiet", g.quiet, "Suppress warnings");

	TrainOptions train_opts;
	auto *train_cmd = app.add_subcommand("train", "Train a model and write it as JSON");
	train_cmd->fallthrough();
	train_cmd->add_option("--hidden", train_opts.hidden, "Hidden layers, e.g. 4/logsig or 2/logsig,3/tansig")
	    ->capture_default_str();
	train_cmd->add_option("--output-layer", train_opts.output_layer)->capture_default_str();
	train_cmd->add_option("--epochs", train_opts.params.max_epochs)->capture_default_str()->check(CLI::NonNegativeNumber);
	train_cmd->add_option("--lr", train_opts.params.eta)->capture_default_str();
	train_cmd->add_option("--goal", train_opts.params.error_goal)->capture_default_str();
	train_cmd->add_option("--momentum", train_opts.params.momentum)->capture_default_str();
	train_cmd->add_option("--lr-inc", train_opts.params.lr_increase)->capture_default_str();
	train_cmd->add_option("--lr-dec", train_opts.params.lr_decrease)->capture_default_str();
	train_cmd->add_option("--max-ratio", train_opts.params.max_error_ratio)->capture_default_str();
	train_cmd->add_flag("--no-adaptive", train_opts.no_adaptive, "Plain gradient descent with momentum");
	train_cmd->add_option("--threshold", train_opts.threshold, "Surrogate target threshold")->capture_default_str();
	train_cmd->add_option("-o,--output", train_opts.model_path, "Model file to write")->required();
	train_cmd->add_option("--trace-csv", train_opts.trace_csv, "Write the per-epoch trace as CSV");

	EvalOptions eval_opts;
	auto *eval_cmd = app.add_subcommand("eval", "Evaluate a model on labelled data");
	eval_cmd->fallthrough();
	eval_cmd->add_option("model", eval_opts.model_path)->required();
	eval_cmd->add_option("--split", eval_opts.split)
	    ->check(CLI::IsMember({"train", "test", "all"}))
	    ->capture_default_str();
	eval_cmd->add_flag("--paper-validation", eval_opts.paper_validation,
	                   "Continue training on the evaluation set and print the error trajectory");
	eval_cmd->add_option("--max-epochs", eval_opts.max_epochs, "Epoch budget for --paper-validation")
	    ->capture_default_str()
	    ->check(CLI::NonNegativeNumber);

	SweepOptions sweep_opts;
	auto *sweep_cmd = app.add_subcommand("sweep", "Run the 15-row architecture grid");
	sweep_cmd->fallthrough();
	sweep_cmd->add_option("--seeds", sweep_opts.seeds, "Range a..b or list a,b,c")->capture_default_str();
	sweep_cmd->add_option("--csv", sweep_opts.csv_path, "Also write the table as CSV");
	sweep_cmd->add_option("--threshold", sweep_opts.threshold)->capture_default_str();

	PredictOptions predict_opts;
	auto *predict_cmd = app.add_subcommand("predict", "Diagnose one respondent");
	predict_cmd->fallthrough();
	predict_cmd->add_option("model", predict_opts.model_path)->required();
	auto *input = predict_cmd->add_option("--input", predict_opts.input, "x1,x2,x3");
	predict_cmd->add_option("--questionnaire", predict_opts.questionnaire, "factor_id,score CSV")
	    ->excludes(input);

	ScoreOptions score_opts;
	auto *score_cmd = app.add_subcommand("score", "Aggregate a questionnaire into x1, x2, x3");
	score_cmd->fallthrough();
	score_cmd->add_option("questionnaire", score_opts.path);
	score_cmd->add_flag("--list-factors", score_opts.list_factors, "Print the canonical factor ids");

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError &e) {
		return app.exit(e);
	}

	try {
		if (*train_cmd)
			return cmd_train(g, train_opts);
		if (*eval_cmd)
			return cmd_eval(g, eval_opts);
		if (*sweep_cmd)
			return cmd_sweep(g, sweep_opts);
		if (*predict_cmd)
			return cmd_predict(g, predict_opts);
		if (*score_cmd)
			return cmd_score(g, score_opts);
	} catch (const std::exception &e) {
		std::fflush(stdout);
		std::fprintf(stderr, "error: %s\n", e.what());
		return 1;
	}
	return 1;
}
