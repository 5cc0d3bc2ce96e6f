#include <doctest.h>

#include <stdexcept>

#include "hrdiag/dataset.hpp"
#include "hrdiag/questionnaire.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

using namespace hrdiag;

namespace {

const Pattern &by_id(const std::vector<Pattern> &rows, const std::string &id)
{
	const auto it = std::find_if(rows.begin(), rows.end(), [&](const Pattern &p) { return p.id == id; });
	REQUIRE(it != rows.end());
	return *it;
}

std::string error_of(const std::string &csv, bool targets)
{
	std::istringstream in(csv);
	try {
		parse_csv(in, targets);
	} catch (const std::exception &e) {
		return e.what();
	}
	return "";
}

std::string uniform_questionnaire(double strategic, double tactical, double operational)
{
	std::ostringstream out;
	out << "factor_id,score\n";
	for (const auto &f : factors()) {
		const double s = f.group == FactorGroup::strategic ? strategic
		                 : f.group == FactorGroup::tactical ? tactical
		                                                    : operational;
		out << f.id << ',' << s << '\n';
	}
	return out.str();
}

} // namespace

TEST_CASE("embedded tables")
{
	const Dataset d = load_embedded();
	CHECK(d.training.size() == 52);
	CHECK(d.testing.size() == 23);
	CHECK(by_id(d.training, "Emp1").features() == std::array<double, 3>{1, 2, 1});
	CHECK(by_id(d.training, "Emp30").features() == std::array<double, 3>{5, 5, 5});
	CHECK(by_id(d.training, "Emp49").features() == std::array<double, 3>{3.01, 2, -1});
	CHECK(by_id(d.testing, "Empt1").features() == std::array<double, 3>{1.3, 1.2, 1.1});
	CHECK(by_id(d.testing, "Empt16").features() == std::array<double, 3>{0, 0, 0});
	for (const auto *rows : {&d.training, &d.testing})
		for (const auto &p : *rows) {
			CHECK_FALSE(p.target.has_value());
			for (double v : p.features()) {
				CHECK(v >= input_min);
				CHECK(v <= input_max);
			}
		}
}

TEST_CASE("embedded data survives a CSV round trip")
{
	const Dataset d = load_embedded();
	for (const auto *rows : {&d.training, &d.testing}) {
		std::stringstream buf;
		write_csv(buf, *rows);
		const auto back = parse_csv(buf, false).patterns;
		REQUIRE(back.size() == rows->size());
		for (std::size_t i = 0; i < back.size(); ++i)
			CHECK(back[i].features() == (*rows)[i].features());
	}
	const auto with_targets = assign_surrogate_targets(d.training);
	std::stringstream buf;
	write_csv(buf, with_targets);
	const auto back = parse_csv(buf, true).patterns;
	for (std::size_t i = 0; i < back.size(); ++i)
		CHECK(back[i].target == with_targets[i].target);
}

TEST_CASE("load_csv parses rows")
{
	std::istringstream plain("strategic,tactical,operational\n1,2,1\n");
	const auto a = parse_csv(plain, false);
	REQUIRE(a.patterns.size() == 1);
	CHECK(a.patterns[0].features() == std::array<double, 3>{1, 2, 1});
	CHECK_FALSE(a.patterns[0].target.has_value());

	std::istringstream targeted("strategic,tactical,operational,target\r\n5,5,5,0.9\r\n\n");
	const auto b = parse_csv(targeted, true);
	REQUIRE(b.patterns.size() == 1);
	CHECK(b.patterns[0].target == 0.9);
}

TEST_CASE("load_csv errors name row and column")
{
	const std::string h = "strategic,tactical,operational\n";
	CHECK(error_of(h + "1,2\n", false) == "row 1: expected 3 columns, found 2");
	CHECK(error_of(h + "1,2,3\n1,x,3\n", false).find("row 2: column tactical: malformed number") == 0);
	CHECK(error_of(h + "6,1,1\n", false).find("row 1: column strategic") == 0);
	CHECK(error_of(h + "1,1,-1.5\n", false).find("outside [-1, 5]") != std::string::npos);
	CHECK(error_of("strategic,tactical,operational,target\n1,1,1,1.5\n", true).find("row 1: column target")
	      == 0);
	CHECK(error_of("a,b,c\n1,1,1\n", false).find("header") == 0);
	CHECK(error_of("", false) == "missing header row");
}

TEST_CASE("values below the Likert floor are warned about, not rejected")
{
	std::istringstream in("strategic,tactical,operational\n0.1,1,-1\n");
	const auto r = parse_csv(in, false);
	CHECK(r.patterns.size() == 1);
	CHECK(r.warnings.size() == 2);
}

TEST_CASE("load_csv reports unreadable paths")
{
	try {
		load_csv("/nonexistent/data.csv", false);
		FAIL("expected an exception");
	} catch (const std::runtime_error &e) {
		CHECK(std::string(e.what()).find("/nonexistent/data.csv") != std::string::npos);
	}
}

TEST_CASE("csv_has_target_column")
{
	const auto dir = std::filesystem::temp_directory_path();
	const auto with = dir / "hrdiag_with_target.csv";
	const auto without = dir / "hrdiag_without_target.csv";
	std::ofstream(with) << "strategic,tactical,operational,target\n1,1,1,0.9\n";
	std::ofstream(without) << "strategic,tactical,operational\n1,1,1\n";
	CHECK(csv_has_target_column(with));
	CHECK_FALSE(csv_has_target_column(without));
	CHECK(load_csv(with, true).patterns.size() == 1);
	std::filesystem::remove(with);
	std::filesystem::remove(without);
}

TEST_CASE("normalization")
{
	const Normalization n;
	CHECK(n.apply(2.0) == 0.0);
	CHECK(n.apply(-1.0) == -1.0);
	CHECK(n.apply(5.0) == 1.0);
	const auto [normed, map] = normalize({{"Emp1", 1, 2, 1, std::nullopt}});
	CHECK(map == n);
	CHECK(normed[0].strategic == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
	CHECK(normed[0].tactical == 0.0);
	CHECK(normed[0].operational == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));

	const auto raw = load_embedded().training;
	const auto back = denormalize(normalize(raw).first, n);
	for (std::size_t i = 0; i < raw.size(); ++i)
		for (std::size_t c = 0; c < 3; ++c)
			CHECK(std::abs(back[i].features()[c] - raw[i].features()[c]) < 1e-12);
}

TEST_CASE("surrogate targets")
{
	const Dataset d = load_embedded();
	const auto t = assign_surrogate_targets(d.training);
	CHECK(by_id(t, "Emp30").target == 0.9);
	CHECK(by_id(t, "Emp6").target == -0.9);
	const auto edge = assign_surrogate_targets({{"b", 2.5, 2.5, 2.5, std::nullopt}});
	CHECK(edge[0].target == 0.9);
	const auto low = assign_surrogate_targets({{"c", 3, 3, 3, std::nullopt}}, 3.5);
	CHECK(low[0].target == -0.9);
	for (const auto &p : assign_surrogate_targets(d.testing))
		CHECK((p.target == 0.9 || p.target == -0.9));
}

TEST_CASE("split_70_30 sizes and determinism")
{
	auto make = [](std::size_t n) {
		std::vector<Pattern> v;
		for (std::size_t i = 0; i < n; ++i)
			v.push_back({"p" + std::to_string(i), double(i % 5), 1, 1, std::nullopt});
		return v;
	};
	CHECK(split_70_30(make(10), 1).first.size() == 7);
	CHECK(split_70_30(make(10), 1).second.size() == 3);
	CHECK(split_70_30(make(75), 1).first.size() == 53);
	CHECK(split_70_30(make(75), 1).second.size() == 22);
	CHECK(split_70_30(make(2), 1).first.size() == 2);
	CHECK(split_70_30(make(30), 9) == split_70_30(make(30), 9));
	CHECK(split_70_30(make(30), 9) != split_70_30(make(30), 10));
	CHECK_THROWS_AS(split_70_30(make(1), 1), std::invalid_argument);
}

TEST_CASE("property: split is a disjoint exhaustive partition")
{
	std::mt19937_64 gen(5);
	for (int trial = 0; trial < 50; ++trial) {
		const std::size_t n = 2 + gen() % 200;
		std::vector<Pattern> v;
		for (std::size_t i = 0; i < n; ++i)
			v.push_back({"p" + std::to_string(i), 1, 1, 1, std::nullopt});
		const auto [train, test] = split_70_30(v, gen());
		CHECK(train.size() == (7 * n + 9) / 10);
		std::set<std::string> ids;
		for (const auto *part : {&train, &test})
			for (const auto &p : *part)
				CHECK(ids.insert(p.id).second);
		CHECK(ids.size() == n);
	}
}

TEST_CASE("to_samples requires targets and normalizes")
{
	const auto s = to_samples({{"a", 5, 2, -1, 0.9}}, Normalization{});
	CHECK(s[0].input == std::vector<double>{1.0, 0.0, -1.0});
	CHECK(s[0].target == std::vector<double>{0.9});
	try {
		to_samples({{"a", 5, 2, -1, std::nullopt}}, Normalization{});
		FAIL("expected an exception");
	} catch (const std::invalid_argument &e) {
		CHECK(std::string(e.what()).find("targets required") == 0);
	}
}

TEST_CASE("factor table layout")
{
	const auto &f = factors();
	CHECK(f.size() == 33);
	const auto count = [&](FactorGroup g) {
		return std::count_if(f.begin(), f.end(), [g](const Factor &x) { return x.group == g; });
	};
	CHECK(count(FactorGroup::strategic) == 10);
	CHECK(count(FactorGroup::tactical) == 14);
	CHECK(count(FactorGroup::operational) == 9);
	// groups are contiguous in questionnaire order
	CHECK(f[0].id == "top_management_support");
	CHECK(f[9].group == FactorGroup::strategic);
	CHECK(f[10].id == "communication");
	CHECK(f[23].group == FactorGroup::tactical);
	CHECK(f[24].group == FactorGroup::operational);
	CHECK(f[32].id == "user_faith_in_technology");
	std::set<std::string_view> ids;
	for (const auto &x : f)
		CHECK(ids.insert(x.id).second);
}

TEST_CASE("aggregate_questionnaire")
{
	auto agg = [](const std::string &csv) {
		std::istringstream in(csv);
		return aggregate_questionnaire(parse_questionnaire(in));
	};
	CHECK(agg(uniform_questionnaire(3, 3, 3)).features() == std::array<double, 3>{3, 3, 3});
	CHECK(agg(uniform_questionnaire(5, 1, 1)).features() == std::array<double, 3>{5, 1, 1});

	std::ostringstream mixed;
	mixed << "factor_id,score\n";
	int i = 0;
	for (const auto &f : factors()) {
		const double s = f.group == FactorGroup::strategic ? double(i++ % 5 + 1) : 1.0;
		mixed << f.id << ',' << s << '\n';
	}
	CHECK(agg(mixed.str()).strategic == 3.0);
}

TEST_CASE("property: aggregates of in-range scores stay in range")
{
	std::mt19937_64 gen(12);
	std::uniform_real_distribution<double> score(1.0, 5.0);
	for (int trial = 0; trial < 100; ++trial) {
		QuestionnaireResponse r;
		for (const auto &f : factors())
			r.scores[std::string(f.id)] = score(gen);
		for (double v : aggregate_questionnaire(r).features()) {
			CHECK(v >= 1.0);
			CHECK(v <= 5.0);
		}
	}
}

TEST_CASE("questionnaire errors name the factor")
{
	auto error_of_q = [](const std::string &csv) -> std::string {
		std::istringstream in(csv);
		try {
			aggregate_questionnaire(parse_questionnaire(in));
		} catch (const std::exception &e) {
			return e.what();
		}
		return "";
	};
	const std::string full = uniform_questionnaire(3, 3, 3);
	const std::string missing = full.substr(0, full.rfind("user_faith_in_technology"));
	CHECK(error_of_q(missing) == "missing factor 'user_faith_in_technology'");
	CHECK(error_of_q(full + "leadership,4\n").find("duplicate factor 'leadership'") != std::string::npos);
	CHECK(error_of_q(full + "morale,4\n").find("unknown factor 'morale'") != std::string::npos);
	CHECK(error_of_q("factor_id,score\nleadership,9\n").find("outside [-1, 5]") != std::string::npos);
	CHECK(error_of_q("factor_id,score\nleadership,abc\n").find("malformed score") != std::string::npos);
	CHECK(error_of_q("id,value\n").find("header") != std::string::npos);
}

TEST_CASE("factor table export")
{
	std::ostringstream out;
	write_factor_table(out);
	const std::string text = out.str();
	CHECK(text.rfind("factor_id,group,description\n", 0) == 0);
	CHECK(std::count(text.begin(), text.end(), '\n') == 34);
}

TEST_CASE("shipped factor table matches the canonical list")
{
	std::ifstream in(std::string(HRDIAG_SOURCE_DIR) + "/docs/factors.csv");
	REQUIRE(in);
	std::stringstream shipped;
	shipped << in.rdbuf();
	std::ostringstream expected;
	write_factor_table(expected);
	CHECK(shipped.str() == expected.str());
}
