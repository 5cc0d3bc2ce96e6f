// Drives the hrdiag executable end to end.

#include <doctest.h>

#include "hrdiag/dataset.hpp"
#include "hrdiag/model_file.hpp"
#include "hrdiag/questionnaire.hpp"
#include "hrdiag/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

using namespace hrdiag;
namespace fs = std::filesystem;

namespace {

struct RunResult {
	int status = -1;
	std::string output; // stdout and stderr
};

RunResult run(const std::string &args)
{
	const std::string command = std::string(HRDIAG_CLI_PATH) + " " + args + " 2>&1";
	RunResult r;
	FILE *pipe = popen(command.c_str(), "r");
	REQUIRE(pipe != nullptr);
	char buf[4096];
	while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe))
		r.output.append(buf, n);
	const int raw = pclose(pipe);
	r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
	return r;
}

fs::path scratch(const std::string &name)
{
	const fs::path dir = fs::temp_directory_path() / "hrdiag_cli_tests";
	fs::create_directories(dir);
	return dir / name;
}

fs::path write_questionnaire(const std::string &name, double score)
{
	const fs::path path = scratch(name);
	std::ofstream out(path);
	out << "factor_id,score\n";
	for (const auto &f : factors())
		out << f.id << ',' << score << '\n';
	return path;
}

std::string line_value(const std::string &text, const std::string &key)
{
	const auto pos = text.find(key);
	if (pos == std::string::npos)
		return "";
	const auto end = text.find('\n', pos);
	return text.substr(pos + key.size(), end - pos - key.size());
}

// Every "MSE: m" line followed by "accuracy: a%" must satisfy a = 100 - m.
void check_accuracy_pairs(const std::string &text)
{
	const std::regex pair(R"(MSE: ([0-9.]+)\n[^\n]*accuracy: ([0-9.]+)%)");
	int pairs = 0;
	for (auto it = std::sregex_iterator(text.begin(), text.end(), pair); it != std::sregex_iterator(); ++it) {
		const double mse = std::stod((*it)[1]);
		const double acc = std::stod((*it)[2]);
		CHECK(std::abs(acc - (100.0 - mse)) < 5e-7);
		++pairs;
	}
	CHECK(pairs > 0);
}

const fs::path &trained_model()
{
	static const fs::path path = [] {
		const fs::path p = scratch("model.json");
		const RunResult r =
		    run("train --embedded --hidden 4/logsig --epochs 1000 --lr 0.01 --goal 0.01 --seed 42 -o " + p.string());
		REQUIRE(r.status == 0);
		return p;
	}();
	return path;
}

} // namespace

TEST_CASE("train writes a model and reports MSE and accuracy")
{
	const fs::path model = scratch("train_report.json");
	const RunResult r = run("train --embedded --hidden 4/logsig --epochs 1000 --lr 0.01 --goal 0.01 --seed 42 -o "
	                        + model.string());
	CHECK(r.status == 0);
	CHECK(fs::exists(model));
	CHECK(r.output.find("MSE: ") != std::string::npos);
	CHECK(r.output.find("accuracy: ") != std::string::npos);
	CHECK(r.output.find("stopping reason: ") != std::string::npos);
	CHECK(r.output.find("note: targets are surrogate") != std::string::npos);
	CHECK(r.output.find("error") == std::string::npos);
	check_accuracy_pairs(r.output);

	const ModelFile m = load_model(model);
	CHECK(m.network.config.layers == std::vector<LayerSpec>{{4, Activation::logsig}, {1, Activation::tansig}});
	CHECK(m.network.config.seed == 42);
	CHECK(m.target_rule.threshold == 2.5);
}

TEST_CASE("global flags may follow the subcommand")
{
	const fs::path model = scratch("flags_after.json");
	CHECK(run("train -o " + model.string() + " --seed 3 --quiet --epochs 5").status == 0);
	CHECK(load_model(model).network.config.seed == 3);
}

TEST_CASE("zero-epoch training keeps the initial weights")
{
	const fs::path model = scratch("zero.json");
	const RunResult r = run("train --epochs 0 --seed 42 -o " + model.string());
	CHECK(r.status == 0);
	CHECK(r.output.find("zero-epoch run") != std::string::npos);
	const ModelFile m = load_model(model);
	CHECK(m.network == init_network(m.network.config));
}

TEST_CASE("training with a missing data file fails and names the path")
{
	const RunResult r = run("train --data /nonexistent/responses.csv -o " + scratch("x.json").string());
	CHECK(r.status != 0);
	CHECK(r.output.find("/nonexistent/responses.csv") != std::string::npos);
	CHECK(r.output.find("error: ") != std::string::npos);
}

TEST_CASE("invalid configurations are rejected")
{
	CHECK(run("train --hidden 0/logsig -o " + scratch("x.json").string()).status != 0);
	CHECK(run("train --hidden 3/relu -o " + scratch("x.json").string()).status != 0);
	CHECK(run("train --momentum 1.5 -o " + scratch("x.json").string()).status != 0);
	CHECK(run("train --output-layer 2/tansig -o " + scratch("x.json").string()).status != 0);
}

TEST_CASE("training from a CSV without targets uses the surrogate rule")
{
	const fs::path data = scratch("responses.csv");
	{
		std::ofstream out(data);
		write_csv(out, load_embedded().training);
	}
	const fs::path model = scratch("csv_model.json");
	const RunResult r = run("train --quiet --data " + data.string() + " --epochs 200 -o " + model.string());
	CHECK(r.status == 0);
	CHECK(r.output.find("seeded 70/30 split") != std::string::npos);
	CHECK(load_model(model).target_rule.is_surrogate());

	// eval needs real targets
	const RunResult e = run("eval " + model.string() + " --data " + data.string());
	CHECK(e.status != 0);
	CHECK(e.output.find("targets required") != std::string::npos);
}

TEST_CASE("training from a CSV with targets records an external rule")
{
	const fs::path data = scratch("labelled.csv");
	{
		std::ofstream out(data);
		write_csv(out, assign_surrogate_targets(load_embedded().training));
	}
	const fs::path model = scratch("external.json");
	CHECK(run("train --data " + data.string() + " --epochs 50 --seed 9 -o " + model.string()).status == 0);
	const ModelFile m = load_model(model);
	CHECK_FALSE(m.target_rule.is_surrogate());

	// evaluating on the same seeded split reproduces the training MSE
	const RunResult e = run("eval " + model.string() + " --data " + data.string() + " --split train --seed 9");
	CHECK(e.status == 0);
	CHECK(std::abs(std::stod(line_value(e.output, "MSE: ")) - m.final_train_mse) < 5e-7);
}

TEST_CASE("model MSE on its own training data equals the stored training MSE")
{
	const ModelFile m = load_model(trained_model());
	const Dataset d = load_embedded();
	const auto samples = to_samples(assign_surrogate_targets(d.training, *m.target_rule.threshold), m.normalization);
	CHECK(std::abs(evaluate(m.network, samples) - m.final_train_mse) <= 1e-12);

	const RunResult r = run("eval " + trained_model().string() + " --split train");
	CHECK(r.status == 0);
	CHECK(line_value(r.output, "MSE: ") == [&] {
		char buf[32];
		std::snprintf(buf, sizeof buf, "%.6f", m.final_train_mse);
		return std::string(buf);
	}());
	check_accuracy_pairs(r.output);
}

TEST_CASE("eval --paper-validation prints the epoch trajectory")
{
	const RunResult r = run("eval " + trained_model().string() + " --paper-validation");
	CHECK(r.status == 0);
	const std::regex line(R"(^error=\d+\.\d{6} no\.of epoches=\d+$)");
	int count = 0;
	std::istringstream in(r.output);
	std::string l;
	while (std::getline(in, l))
		if (l.rfind("error=", 0) == 0) {
			CHECK(std::regex_match(l, line));
			++count;
		}
	CHECK(count >= 1);
	CHECK(r.output.find("error_min testing: ") != std::string::npos);
	CHECK(r.output.find("confusion: ") != std::string::npos);
	check_accuracy_pairs(r.output);
}

TEST_CASE("eval rejects broken model files")
{
	const fs::path bad = scratch("bad.json");
	std::ofstream(bad) << "{\"schema_version\": 99}";
	const RunResult r = run("eval " + bad.string());
	CHECK(r.status != 0);
	CHECK(r.output.find("schema version 99") != std::string::npos);
}

TEST_CASE("predict from questionnaires at the extremes")
{
	const RunResult high = run("predict " + trained_model().string() + " --questionnaire "
	                           + write_questionnaire("all5.csv", 5).string());
	CHECK(high.status == 0);
	CHECK(high.output.find("x1=5.000 x2=5.000 x3=5.000") != std::string::npos);
	CHECK(high.output.find("diagnosis: success") != std::string::npos);
	CHECK(high.output.find("note: targets are surrogate") != std::string::npos);

	const RunResult low = run("predict " + trained_model().string() + " --questionnaire "
	                          + write_questionnaire("all1.csv", 1).string());
	CHECK(low.status == 0);
	CHECK(low.output.find("diagnosis: failure") != std::string::npos);
	check_accuracy_pairs(low.output);
}

TEST_CASE("predict is repeatable and matches the library to 0 ulp")
{
	const std::string args = "predict " + trained_model().string() + " --input 3.2,1.5,4";
	const RunResult a = run(args);
	const RunResult b = run(args);
	CHECK(a.status == 0);
	CHECK(a.output == b.output);

	const ModelFile m = load_model(trained_model());
	const std::vector<double> x{m.normalization.apply(3.2), m.normalization.apply(1.5), m.normalization.apply(4.0)};
	char expected[64];
	std::snprintf(expected, sizeof expected, "%.17g", forward(m.network, x).output[0]);
	CHECK(line_value(a.output, "raw output: ") == expected);
}

TEST_CASE("predict rejects out-of-range and malformed input")
{
	const RunResult r = run("predict " + trained_model().string() + " --input 6,1,1");
	CHECK(r.status != 0);
	CHECK(r.output.find("[-1, 5]") != std::string::npos);
	CHECK(run("predict " + trained_model().string() + " --input 1,2").status != 0);
	CHECK(run("predict " + trained_model().string() + " --input 1,2,x").status != 0);
	CHECK(run("predict " + trained_model().string()).status != 0);
}

TEST_CASE("score prints aggregates in questionnaire order")
{
	const RunResult r = run("score " + write_questionnaire("all3.csv", 3).string());
	CHECK(r.status == 0);
	CHECK(r.output.find("x1=3.000 x2=3.000 x3=3.000") != std::string::npos);
	std::size_t last = 0;
	for (const auto &f : factors()) {
		const auto pos = r.output.find(std::string(f.id) + " ");
		REQUIRE(pos != std::string::npos);
		CHECK(pos > last);
		last = pos;
	}
}

TEST_CASE("score rejects duplicate and missing factors")
{
	const fs::path dup = write_questionnaire("dup.csv", 3);
	std::ofstream(dup, std::ios::app) << "leadership,4\n";
	const RunResult r = run("score " + dup.string());
	CHECK(r.status != 0);
	CHECK(r.output.find("duplicate factor 'leadership'") != std::string::npos);

	const fs::path missing = scratch("missing.csv");
	std::ofstream(missing) << "factor_id,score\nleadership,4\n";
	const RunResult m = run("score " + missing.string());
	CHECK(m.status != 0);
	CHECK(m.output.find("missing factor 'top_management_support'") != std::string::npos);

	const RunResult list = run("score --list-factors");
	CHECK(list.status == 0);
	CHECK(list.output.find("user_faith_in_technology,operational") != std::string::npos);
}

TEST_CASE("sweep prints fifteen rows and writes a CSV that parses back")
{
	const fs::path csv = scratch("sweep.csv");
	const RunResult r = run("sweep --seeds 1..10 --csv " + csv.string());
	CHECK(r.status == 0);
	const auto header = r.output.find("Network configuration");
	REQUIRE(header != std::string::npos);
	const auto body = r.output.substr(header);
	std::size_t rows = 0;
	for (const auto &label : {"1/tansig + 1/tansig", "2/logsig + 1/tansig", "3/logsig + 1/tansig",
	                          "4/logsig + 1/tansig"}) {
		for (auto pos = body.find(label); pos != std::string::npos; pos = body.find(label, pos + 1))
			++rows;
	}
	CHECK(rows == 15);
	CHECK(r.output.find("10/10") != std::string::npos);

	std::ifstream in(csv);
	const auto parsed = parse_sweep_csv(in);
	REQUIRE(parsed.size() == 15);

	Dataset d = load_embedded();
	d.training = assign_surrogate_targets(d.training);
	d.testing = assign_surrogate_targets(d.testing);
	SweepConfig c = canonical_grid();
	const auto rows_lib = run_sweep(c, d, TrainParams{});
	for (std::size_t i = 0; i < 15; ++i) {
		CHECK(parsed[i].label == rows_lib[i].label);
		CHECK(parsed[i].mean_mse == rows_lib[i].mean_mse);
		CHECK(parsed[i].seed_mse.size() == 10);
	}
}

TEST_CASE("sweep rejects malformed seed lists")
{
	CHECK(run("sweep --seeds 5..1").status != 0);
	CHECK(run("sweep --seeds a,b").status != 0);
}

TEST_CASE("train --trace-csv writes one row per epoch")
{
	const fs::path trace = scratch("trace.csv");
	const RunResult r = run("train --epochs 25 --goal 1e-9 -o " + scratch("t.json").string() + " --trace-csv "
	                        + trace.string());
	CHECK(r.status == 0);
	std::ifstream in(trace);
	std::string line;
	std::getline(in, line);
	CHECK(line == "epoch,mse,learning_rate,accepted");
	int rows = 0;
	while (std::getline(in, line))
		CHECK(line.rfind(std::to_string(++rows) + ",", 0) == 0);
	CHECK(rows == 25);
}
