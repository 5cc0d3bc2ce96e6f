#include "hrdiag/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace hrdiag {

namespace {

struct RawRow {
	const char *id;
	double strategic;
	double tactical;
	double operational;
};

// Training table (70% of responses).
constexpr RawRow training_rows[] = {
	{"Emp1", 1, 2, 1},
	{"Emp2", 2, 3, 1.9},
	{"Emp3", 4, 1.5, 1.5},
	{"Emp4", 2, 3, 4},
	{"Emp5", 1.7, 1.6, 2.5},
	{"Emp6", 1, 1, 1},
	{"Emp7", 1.2, 1.3, 1.4},
	{"Emp8", 1.7, 1.8, 3},
	{"Emp9", 1.8, 2, 4},
	{"Emp10", 4, 1.8, 2},
	{"Emp11", 2, 5, 1},
	{"Emp12", 2.5, 2.2, 2},
	{"Emp13", 2.5, 2, 1.6},
	{"Emp14", 1.6, 2, 2.5},
	{"Emp15", 1, -1, 1},
	{"Emp16", -1, -1, 1},
	{"Emp17", -1, 1, -1},
	{"Emp18", 1, 1, -1},
	{"Emp19", 1.2, -1, 1},
	{"Emp20", -1, 1.2, 1.5},
	{"Emp21", 3.6, 1.2, 4},
	{"Emp22", 3.6, 3.6, 3.6},
	{"Emp23", 4, 4, 5},
	{"Emp24", 5, 4, 2},
	{"Emp25", 5, 5, 1},
	{"Emp26", 4, 5, -1},
	{"Emp27", 3, 2, -1},
	{"Emp28", 0.5, 1.5, 0.5},
	{"Emp29", 2.1, 3.1, 4.1},
	{"Emp30", 5, 5, 5},
	{"Emp31", 0.1, 0.2, 0.5},
	{"Emp32", 0.5, 0.7, 1.5},
	{"Emp33", 4.1, 4.2, 4.3},
	{"Emp34", 5, 0.1, 0.2},
	{"Emp35", 0.1, 2, 0.1},
	{"Emp36", 1.4, 5, -1},
	{"Emp37", 1.5, 4, 1},
	{"Emp38", 1.6, 3, 2},
	{"Emp39", 2.1, 2, 3},
	{"Emp40", 2.1, 1, 4},
	{"Emp41", 2.3, 5, 5},
	{"Emp42", 2.5, 4, -1},
	{"Emp43", 3.3, 3, 1},
	{"Emp44", 3.5, 2, 2},
	{"Emp45", 4, 1, 3},
	{"Emp46", 4.9, 5, 4},
	{"Emp47", 4.1, 4, 5},
	{"Emp48", 4.3, 3, -1},
	{"Emp49", 3.01, 2, -1},
	{"Emp50", 2.01, -1, 1},
	{"Emp51", 2.03, 5, 1},
	{"Emp52", 5, 4, 1},};

// Testing table (remaining 30%).
constexpr RawRow testing_rows[] = {
	{"Empt1", 1.3, 1.2, 1.1},
	{"Empt2", 1.5, 1.5, 1.5},
	{"Empt3", 1.7, 1.5, 1.6},
	{"Empt4", 2, 1, 0},
	{"Empt5", 3, 2, 2},
	{"Empt6", 1.6, 1.6, 1.6},
	{"Empt7", 4, 1, 2},
	{"Empt8", 1, 4, 1.6},
	{"Empt9", 2, 4, 4},
	{"Empt10", 3.3, 3.1, 3.4},
	{"Empt11", 2.5, 3.5, 2},
	{"Empt12", 4.1, 3.5, 2.1},
	{"Empt13", 1, 1, 1},
	{"Empt14", 1.3, 1.1, 1.9},
	{"Empt15", 1.8, 2.3, 2.1},
	{"Empt16", 0, 0, 0},
	{"Empt17", 0, 1, 0},
	{"Empt18", 0, 0, 1},
	{"Empt19", 3.5, 4.5, 5},
	{"Empt20", 1.8, 1.6, 2.9},
	{"Empt21", 1, 0, 0},
	{"Empt22", 2.5, 1, 1},
	{"Empt23", 3.5, 1.6, 1.7},};

template <std::size_t N>
std::vector<Pattern> to_patterns(const RawRow (&rows)[N])
{
	std::vector<Pattern> out;
	out.reserve(N);
	for (const auto &r : rows)
		out.push_back({r.id, r.strategic, r.tactical, r.operational, std::nullopt});
	return out;
}

constexpr const char *column_names[] = {"strategic", "tactical", "operational", "target"};

std::string_view trim(std::string_view s)
{
	while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
		s.remove_prefix(1);
	while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
		s.remove_suffix(1);
	return s;
}

std::vector<std::string_view> split_commas(std::string_view line)
{
	std::vector<std::string_view> cells;
	std::size_t start = 0;
	while (true) {
		const auto comma = line.find(',', start);
		cells.push_back(trim(line.substr(start, comma - start)));
		if (comma == std::string_view::npos)
			break;
		start = comma + 1;
	}
	return cells;
}

std::string row_prefix(std::size_t row) { return "row " + std::to_string(row) + ": "; }

double parse_number(std::string_view cell, std::size_t row, std::size_t column)
{
	double value = 0.0;
	if (!cell.empty() && cell.front() == '+')
		cell.remove_prefix(1);
	const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
	if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(value))
		throw std::runtime_error(row_prefix(row) + "column " + column_names[column]
		                         + ": malformed number '" + std::string(cell) + "'");
	return value;
}

std::string format_number(double v)
{
	char buf[64];
	const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
	return std::string(buf, ptr);
}

} // namespace

Dataset load_embedded()
{
	return {to_patterns(training_rows), to_patterns(testing_rows), Normalization{}};
}

CsvPatterns parse_csv(std::istream &in, bool has_targets)
{
	const std::size_t expected = has_targets ? 4 : 3;
	std::string line;
	if (!std::getline(in, line))
		throw std::runtime_error("missing header row");
	const auto header = split_commas(line);
	if (header.size() != expected)
		throw std::runtime_error("header: expected " + std::to_string(expected) + " columns, found "
		                         + std::to_string(header.size()));
	for (std::size_t c = 0; c < expected; ++c)
		if (header[c] != column_names[c])
			throw std::runtime_error("header: column " + std::to_string(c + 1) + " must be '"
			                         + column_names[c] + "', found '" + std::string(header[c]) + "'");

	CsvPatterns result;
	std::size_t row = 0;
	while (std::getline(in, line)) {
		if (trim(line).empty())
			continue;
		++row;
		const auto cells = split_commas(line);
		if (cells.size() != expected)
			throw std::runtime_error(row_prefix(row) + "expected " + std::to_string(expected)
			                         + " columns, found " + std::to_string(cells.size()));
		double x[3];
		for (std::size_t c = 0; c < 3; ++c) {
			x[c] = parse_number(cells[c], row, c);
			if (x[c] < input_min || x[c] > input_max)
				throw std::runtime_error(row_prefix(row) + "column " + column_names[c] + ": value "
				                         + format_number(x[c]) + " outside [-1, 5]");
			if (x[c] < 1.0)
				result.warnings.push_back(row_prefix(row) + "column " + column_names[c]
				                          + ": value " + format_number(x[c])
				                          + " is below the Likert floor of 1");
		}
		Pattern p{"row" + std::to_string(row), x[0], x[1], x[2], std::nullopt};
		if (has_targets) {
			const double y = parse_number(cells[3], row, 3);
			if (y < target_min || y > target_max)
				throw std::runtime_error(row_prefix(row) + "column target: value " + format_number(y)
				                         + " outside [-1, 1]");
			p.target = y;
		}
		result.patterns.push_back(std::move(p));
	}
	return result;
}

CsvPatterns load_csv(const std::filesystem::path &path, bool has_targets)
{
	std::ifstream in(path);
	if (!in)
		throw std::runtime_error("cannot open data file '" + path.string() + "'");
	try {
		return parse_csv(in, has_targets);
	} catch (const std::runtime_error &e) {
		throw std::runtime_error(path.string() + ": " + e.what());
	}
}

bool csv_has_target_column(const std::filesystem::path &path)
{
	std::ifstream in(path);
	if (!in)
		throw std::runtime_error("cannot open data file '" + path.string() + "'");
	std::string line;
	if (!std::getline(in, line))
		throw std::runtime_error(path.string() + ": missing header row");
	const auto header = split_commas(line);
	return header.size() == 4 && header[3] == "target";
}

void write_csv(std::ostream &out, const std::vector<Pattern> &patterns)
{
	const bool targets = !patterns.empty()
	                     && std::all_of(patterns.begin(), patterns.end(),
	                                    [](const Pattern &p) { return p.target.has_value(); });
	out << "strategic,tactical,operational" << (targets ? ",target" : "") << '\n';
	for (const auto &p : patterns) {
		out << format_number(p.strategic) << ',' << format_number(p.tactical) << ','
		    << format_number(p.operational);
		if (targets)
			out << ',' << format_number(*p.target);
		out << '\n';
	}
}

std::pair<std::vector<Pattern>, Normalization> normalize(const std::vector<Pattern> &patterns)
{
	const Normalization map;
	std::vector<Pattern> out = patterns;
	for (auto &p : out) {
		p.strategic = map.apply(p.strategic);
		p.tactical = map.apply(p.tactical);
		p.operational = map.apply(p.operational);
	}
	return {std::move(out), map};
}

std::vector<Pattern> denormalize(const std::vector<Pattern> &patterns, const Normalization &map)
{
	std::vector<Pattern> out = patterns;
	for (auto &p : out) {
		p.strategic = map.invert(p.strategic);
		p.tactical = map.invert(p.tactical);
		p.operational = map.invert(p.operational);
	}
	return out;
}

std::vector<Pattern> assign_surrogate_targets(const std::vector<Pattern> &patterns, double threshold)
{
	std::vector<Pattern> out = patterns;
	for (auto &p : out)
		p.target = p.mean() >= threshold ? success_target : failure_target;
	return out;
}

std::pair<std::vector<Pattern>, std::vector<Pattern>> split_70_30(const std::vector<Pattern> &patterns,
                                                                  std::uint64_t seed)
{
	const std::size_t n = patterns.size();
	if (n < 2)
		throw std::invalid_argument("need at least 2 patterns to split, got " + std::to_string(n));

	std::vector<std::size_t> order(n);
	for (std::size_t i = 0; i < n; ++i)
		order[i] = i;
	// std::shuffle and uniform_int_distribution are implementation-defined;
	// spell out the draw so a seed means the same split everywhere.
	std::mt19937_64 gen(seed);
	for (std::size_t i = n - 1; i > 0; --i) {
		const std::uint64_t bound = i + 1;
		const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
		std::uint64_t r;
		do {
			r = gen();
		} while (r >= limit);
		std::swap(order[i], order[r % bound]);
	}

	const std::size_t n_train = (7 * n + 9) / 10;
	std::pair<std::vector<Pattern>, std::vector<Pattern>> out;
	for (std::size_t i = 0; i < n; ++i)
		(i < n_train ? out.first : out.second).push_back(patterns[order[i]]);
	return out;
}

std::vector<Sample> to_samples(const std::vector<Pattern> &patterns, const Normalization &map)
{
	std::vector<Sample> out;
	out.reserve(patterns.size());
	for (const auto &p : patterns) {
		if (!p.target)
			throw std::invalid_argument("targets required: pattern '" + p.id + "' has no target");
		out.push_back({{map.apply(p.strategic), map.apply(p.tactical), map.apply(p.operational)},
		               {*p.target}});
	}
	return out;
}

} // namespace hrdiag
