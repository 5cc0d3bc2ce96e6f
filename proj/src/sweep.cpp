#include "hrdiag/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hrdiag {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::string exact(double v)
{
	char buf[64];
	const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
	return std::string(buf, ptr);
}

double parse_double(std::string_view s)
{
	double v = 0.0;
	// to_chars writes "nan" for NaN; from_chars reads it back
	const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
	if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
		throw std::runtime_error("sweep csv: malformed number '" + std::string(s) + "'");
	return v;
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
	std::vector<std::string_view> out;
	std::size_t start = 0;
	while (true) {
		const auto pos = line.find(sep, start);
		out.push_back(line.substr(start, pos - start));
		if (pos == std::string_view::npos)
			break;
		start = pos + 1;
	}
	return out;
}

SeedRun run_cell(const GridRow &row, const LayerSpec &output_layer, std::uint64_t seed,
                 const std::vector<Sample> &train_set, const std::vector<Sample> &test_set,
                 const TrainParams &base)
{
	SeedRun run;
	run.seed = seed;
	run.test_mse = nan;
	try {
		NetworkConfig config{3, row.hidden, seed};
		config.layers.push_back(output_layer);
		TrainParams params = base;
		params.max_epochs = row.epochs;
		params.error_goal = row.error_goal;
		params.eta = row.learning_rate;

		TrainResult result = train(init_network(config), train_set, params);
		run.epochs_run = static_cast<int>(result.trace.epochs.size());
		run.stopping_reason = result.trace.stopping_reason;
		run.train_mse = result.trace.final_mse().value_or(evaluate(result.network, train_set));
		if (!test_set.empty())
			run.test_mse = evaluate(result.network, test_set);
		run.network = std::move(result.network);
		if (!std::isfinite(run.train_mse) || !run.network.params.all_finite()) {
			run.failed = true;
			run.error = "training diverged";
		}
	} catch (const std::exception &e) {
		run.failed = true;
		run.error = e.what();
	}
	return run;
}

void summarize(SweepRow &row)
{
	double sum = 0.0;
	double test_sum = 0.0;
	std::size_t ok = 0;
	std::size_t test_ok = 0;
	row.min_mse = nan;
	for (const auto &r : row.runs) {
		if (r.failed)
			continue;
		sum += r.train_mse;
		++ok;
		if (std::isnan(row.min_mse) || r.train_mse < row.min_mse)
			row.min_mse = r.train_mse;
		if (!std::isnan(r.test_mse)) {
			test_sum += r.test_mse;
			++test_ok;
		}
	}
	row.mean_mse = ok ? sum / static_cast<double>(ok) : nan;
	row.mean_test_mse = test_ok ? test_sum / static_cast<double>(test_ok) : nan;
}

} // namespace

bool SweepRow::failed() const
{
	return std::any_of(runs.begin(), runs.end(), [](const SeedRun &r) { return r.failed; });
}

SweepConfig canonical_grid()
{
	const LayerSpec one_tansig{1, Activation::tansig};
	const LayerSpec two_logsig{2, Activation::logsig};
	const LayerSpec three_logsig{3, Activation::logsig};
	const LayerSpec four_logsig{4, Activation::logsig};

	SweepConfig config;
	for (int epochs : {35, 40, 45, 50, 80, 400, 1000})
		config.grid.push_back({{one_tansig}, epochs, 0.01, 0.01});
	for (int epochs : {35, 100, 200, 500, 1000})
		config.grid.push_back({{two_logsig}, epochs, 0.01, 0.01});
	for (int epochs : {35, 1000})
		config.grid.push_back({{three_logsig}, epochs, 0.01, 0.01});
	config.grid.push_back({{four_logsig}, 1000, 0.01, 0.01});
	for (std::uint64_t s = 1; s <= 10; ++s)
		config.seeds.push_back(s);
	return config;
}

std::string configuration_label(const GridRow &row, const LayerSpec &output_layer)
{
	std::string label;
	for (const auto &layer : row.hidden)
		label += to_string(layer) + " + ";
	return label + to_string(output_layer);
}

std::vector<SweepRow> run_sweep(const SweepConfig &config, const Dataset &data,
                                const TrainParams &params_base, Execution exec)
{
	if (config.grid.empty())
		throw std::invalid_argument("sweep grid is empty");
	if (config.seeds.empty())
		throw std::invalid_argument("sweep needs at least one seed");
	params_base.validate();

	const std::vector<Sample> train_set = to_samples(data.training, data.normalization);
	const std::vector<Sample> test_set = to_samples(data.testing, data.normalization);

	const std::size_t n_seeds = config.seeds.size();
	const auto n_cells = static_cast<std::ptrdiff_t>(config.grid.size() * n_seeds);
	std::vector<SeedRun> cells(static_cast<std::size_t>(n_cells));

	if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
		for (std::ptrdiff_t i = 0; i < n_cells; ++i) {
			const auto idx = static_cast<std::size_t>(i);
			cells[idx] = run_cell(config.grid[idx / n_seeds], config.output_layer,
			                      config.seeds[idx % n_seeds], train_set, test_set, params_base);
		}
	} else {
		for (std::size_t idx = 0; idx < cells.size(); ++idx)
			cells[idx] = run_cell(config.grid[idx / n_seeds], config.output_layer,
			                      config.seeds[idx % n_seeds], train_set, test_set, params_base);
	}

	std::vector<SweepRow> rows;
	rows.reserve(config.grid.size());
	for (std::size_t r = 0; r < config.grid.size(); ++r) {
		const GridRow &g = config.grid[r];
		SweepRow row{configuration_label(g, config.output_layer), g.epochs, g.error_goal,
		             g.learning_rate, {}, 0.0, 0.0, 0.0};
		for (std::size_t s = 0; s < n_seeds; ++s)
			row.runs.push_back(std::move(cells[r * n_seeds + s]));
		summarize(row);
		rows.push_back(std::move(row));
	}
	return rows;
}

std::string render_table(const std::vector<SweepRow> &rows)
{
	if (rows.empty())
		throw std::invalid_argument("nothing to render");
	std::ostringstream out;
	char line[256];
	std::snprintf(line, sizeof line, "%-30s %7s %10s %8s %10s %10s %10s %9s %6s\n", "Network configuration",
	              "Epochs", "Error goal", "LR", "Mean MSE", "Min MSE", "Test MSE", "Accuracy", "Seeds");
	out << line;
	for (const auto &row : rows) {
		const std::size_t ok = static_cast<std::size_t>(
		    std::count_if(row.runs.begin(), row.runs.end(), [](const SeedRun &r) { return !r.failed; }));
		char seeds[32];
		std::snprintf(seeds, sizeof seeds, "%zu/%zu", ok, row.runs.size());
		// accuracy is derived from the MSE exactly as printed beside it
		char mean_text[32];
		std::snprintf(mean_text, sizeof mean_text, "%.6f", row.mean_mse);
		const double printed_mean = std::strtod(mean_text, nullptr);
		std::snprintf(line, sizeof line, "%-30s %7d %10.4g %8.4g %10s %10.6f %10.6f %8.2f%% %6s\n",
		              row.label.c_str(), row.epochs, row.error_goal, row.learning_rate, mean_text,
		              row.min_mse, row.mean_test_mse, accuracy_from_mse(printed_mean), seeds);
		out << line;
		for (const auto &run : row.runs)
			if (run.failed)
				out << "  error: seed " << run.seed << ": " << run.error << '\n';
	}
	return out.str();
}

std::string render_csv(const std::vector<SweepRow> &rows)
{
	std::ostringstream out;
	out << "configuration,epochs,error_goal,learning_rate,mean_mse,min_mse,mean_test_mse,accuracy,"
	       "seed_mse\n";
	for (const auto &row : rows) {
		out << row.label << ',' << row.epochs << ',' << exact(row.error_goal) << ','
		    << exact(row.learning_rate) << ',' << exact(row.mean_mse) << ',' << exact(row.min_mse)
		    << ',' << exact(row.mean_test_mse) << ',' << exact(accuracy_from_mse(row.mean_mse)) << ',';
		for (std::size_t i = 0; i < row.runs.size(); ++i) {
			if (i)
				out << ';';
			out << row.runs[i].seed << ':'
			    << (row.runs[i].failed ? std::string("failed") : exact(row.runs[i].train_mse));
		}
		out << '\n';
	}
	return out.str();
}

std::vector<SweepCsvRow> parse_sweep_csv(std::istream &in)
{
	std::string line;
	if (!std::getline(in, line) || line.rfind("configuration,", 0) != 0)
		throw std::runtime_error("sweep csv: missing header");
	std::vector<SweepCsvRow> rows;
	while (std::getline(in, line)) {
		if (line.empty())
			continue;
		const auto cells = split(line, ',');
		if (cells.size() != 9)
			throw std::runtime_error("sweep csv: expected 9 columns");
		SweepCsvRow row;
		row.label = std::string(cells[0]);
		row.epochs = static_cast<int>(parse_double(cells[1]));
		row.error_goal = parse_double(cells[2]);
		row.learning_rate = parse_double(cells[3]);
		row.mean_mse = parse_double(cells[4]);
		row.min_mse = parse_double(cells[5]);
		row.mean_test_mse = parse_double(cells[6]);
		row.accuracy = parse_double(cells[7]);
		if (!cells[8].empty()) {
			for (auto item : split(cells[8], ';')) {
				const auto colon = item.find(':');
				const auto value = item.substr(colon + 1);
				row.seed_mse.push_back(value == "failed" ? nan : parse_double(value));
			}
		}
		rows.push_back(std::move(row));
	}
	return rows;
}

} // namespace hrdiag
