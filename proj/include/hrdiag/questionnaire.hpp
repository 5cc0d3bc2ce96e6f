#pragma once

#include "hrdiag/dataset.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

namespace hrdiag {

enum class FactorGroup { strategic, tactical, operational };

std::string_view to_string(FactorGroup group);

struct Factor {
	std::string_view id;
	FactorGroup group;
	std::string_view description;
};

inline constexpr std::size_t factor_count = 33;

// The 33 survey factors in questionnaire order: 10 strategic, 14 tactical,
// 9 operational.
const std::array<Factor, factor_count> &factors();

// Nullptr for an unknown id.
const Factor *find_factor(std::string_view id);

struct QuestionnaireResponse {
	std::map<std::string, double, std::less<>> scores;
};

// CSV with header "factor_id,score". Unknown ids, duplicates, malformed or
// out-of-range scores are rejected with the id and row named.
QuestionnaireResponse parse_questionnaire(std::istream &in);
QuestionnaireResponse load_questionnaire(const std::filesystem::path &path);

struct GroupMeans {
	double strategic = 0.0;
	double tactical = 0.0;
	double operational = 0.0;
};

// Unweighted mean of each factor group. Throws naming the first missing factor.
GroupMeans group_means(const QuestionnaireResponse &response);

// (x1, x2, x3) = group means; no target.
Pattern aggregate_questionnaire(const QuestionnaireResponse &response);

// Canonical factor table as CSV: factor_id,group,description.
void write_factor_table(std::ostream &out);

} // namespace hrdiag
