#pragma once

#include "hrdiag/backprop.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hrdiag {

// Declared validity range of the three aggregate parameters. Wider than the
// 1-5 Likert scale because the published tables contain -1, 0 and 0.1.
inline constexpr double input_min = -1.0;
inline constexpr double input_max = 5.0;
inline constexpr double target_min = -1.0;
inline constexpr double target_max = 1.0;

inline constexpr double success_target = 0.9;
inline constexpr double failure_target = -0.9;
inline constexpr double default_target_threshold = 2.5;

// One respondent: strategic (x1), tactical (x2) and operational (x3)
// parameters plus an optional outcome.
struct Pattern {
	std::string id;
	double strategic = 0.0;
	double tactical = 0.0;
	double operational = 0.0;
	std::optional<double> target;

	std::array<double, 3> features() const { return {strategic, tactical, operational}; }
	double mean() const { return (strategic + tactical + operational) / 3.0; }

	bool operator==(const Pattern &) const = default;
};

// v -> (v - offset) / scale; the default sends [-1, 5] onto [-1, 1].
struct Normalization {
	double offset = 2.0;
	double scale = 3.0;

	double apply(double v) const { return (v - offset) / scale; }
	double invert(double v) const { return v * scale + offset; }

	bool operator==(const Normalization &) const = default;
};

struct Dataset {
	std::vector<Pattern> training;
	std::vector<Pattern> testing;
	Normalization normalization;
};

// The 52 training rows and 23 testing rows published with the study, without
// targets (they were never released).
Dataset load_embedded();

struct CsvPatterns {
	std::vector<Pattern> patterns;
	// Non-fatal notes, e.g. values below the Likert floor of 1.
	std::vector<std::string> warnings;
};

// Header "strategic,tactical,operational[,target]" required. Errors name the
// 1-based data row and the offending column.
CsvPatterns load_csv(const std::filesystem::path &path, bool has_targets);
CsvPatterns parse_csv(std::istream &in, bool has_targets);

// True when the header row of the file carries a fourth "target" column.
bool csv_has_target_column(const std::filesystem::path &path);

// Writes the header and one row per pattern with round-trip-exact numbers.
// Targets are written when every pattern has one.
void write_csv(std::ostream &out, const std::vector<Pattern> &patterns);

// Applies the fixed [-1, 5] -> [-1, 1] map to x1..x3. Targets are untouched.
std::pair<std::vector<Pattern>, Normalization> normalize(const std::vector<Pattern> &patterns);
std::vector<Pattern> denormalize(const std::vector<Pattern> &patterns, const Normalization &map);

// Stand-in outcome: +0.9 when mean(x1, x2, x3) >= threshold, else -0.9.
// Expects raw, un-normalized patterns.
std::vector<Pattern> assign_surrogate_targets(const std::vector<Pattern> &patterns,
                                              double threshold = default_target_threshold);

// Seeded Fisher-Yates shuffle; the first ceil(0.7 n) patterns train.
std::pair<std::vector<Pattern>, std::vector<Pattern>> split_70_30(const std::vector<Pattern> &patterns,
                                                                  std::uint64_t seed);

// Network-ready samples: normalized features, one target component.
// Throws when a pattern lacks a target.
std::vector<Sample> to_samples(const std::vector<Pattern> &patterns, const Normalization &map);

} // namespace hrdiag
