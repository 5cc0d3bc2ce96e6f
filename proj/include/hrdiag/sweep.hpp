#pragma once

#include "hrdiag/dataset.hpp"
#include "hrdiag/execution.hpp"
#include "hrdiag/network.hpp"
#include "hrdiag/trainer.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hrdiag {

struct GridRow {
	std::vector<LayerSpec> hidden;
	int epochs = 1000;
	double error_goal = 0.01;
	double learning_rate = 0.01;
};

struct SweepConfig {
	std::vector<GridRow> grid;
	std::vector<std::uint64_t> seeds;
	LayerSpec output_layer{1, Activation::tansig};
};

// The fifteen architecture/epoch combinations of the toolbox study, seeds 1..10.
SweepConfig canonical_grid();

// "4/logsig + 1/tansig": hidden layers then the output layer.
std::string configuration_label(const GridRow &row, const LayerSpec &output_layer);

struct SeedRun {
	std::uint64_t seed = 0;
	bool failed = false;
	std::string error;
	double train_mse = 0.0;
	double test_mse = 0.0; // NaN when the dataset has no testing split
	int epochs_run = 0;
	StopReason stopping_reason = StopReason::epoch_budget_exhausted;
	Network network;
};

struct SweepRow {
	std::string label;
	int epochs = 0;
	double error_goal = 0.0;
	double learning_rate = 0.0;
	std::vector<SeedRun> runs;
	// Over successful runs only; NaN when every run failed.
	double mean_mse = 0.0;
	double min_mse = 0.0;
	double mean_test_mse = 0.0;

	bool failed() const;
};

// Trains every (grid row, seed) cell on data.training and evaluates on
// data.testing. Cells run in parallel under Execution::parallel; row order
// and every value are independent of the execution mode. A cell that throws
// or diverges is marked failed and the sweep continues.
std::vector<SweepRow> run_sweep(const SweepConfig &config, const Dataset &data,
                                const TrainParams &params_base,
                                Execution exec = Execution::parallel);

// Fixed-width table with the study's columns, seed statistics and the
// 100 - MSE accuracy figure.
std::string render_table(const std::vector<SweepRow> &rows);

// One line per grid row; numbers are written round-trip exact.
std::string render_csv(const std::vector<SweepRow> &rows);

struct SweepCsvRow {
	std::string label;
	int epochs = 0;
	double error_goal = 0.0;
	double learning_rate = 0.0;
	double mean_mse = 0.0;
	double min_mse = 0.0;
	double mean_test_mse = 0.0;
	double accuracy = 0.0;
	std::vector<double> seed_mse;
};

std::vector<SweepCsvRow> parse_sweep_csv(std::istream &in);

} // namespace hrdiag
