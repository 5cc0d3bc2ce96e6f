#include "hrdiag/questionnaire.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace hrdiag {

namespace {

using G = FactorGroup;

constexpr std::array<Factor, factor_count> factor_table = {{
    {"top_management_support", G::strategic, "Support of the top management"},
    {"team_working_relationship", G::strategic, "Working relationship in a team (users and staff)"},
    {"leadership", G::strategic, "Leadership"},
    {"clearly_defined_project_goals", G::strategic, "Project goals clearly defined to the team"},
    {"business_environment_understanding", G::strategic, "Thorough understanding of business environment"},
    {"user_involvement_in_development", G::strategic, "User involvement in development issues"},
    {"attitude_towards_risk", G::strategic, "Attitude towards risk (job profile changes due to computers)"},
    {"computer_facility_adequacy", G::strategic, "Adequacy of computer facility to meet functional requirements"},
    {"technology_focus", G::strategic, "Company technology focused"},
    {"project_over_commitment", G::strategic, "Over commitment in the projects"},
    {"communication", G::tactical, "Communication"},
    {"organizational_politics", G::tactical, "Organizational politics"},
    {"resource_allocation_priority", G::tactical, "Priority of organizational units to allocate resources to projects"},
    {"organizational_culture", G::tactical, "Organizational culture"},
    {"skilled_resources", G::tactical, "Skilled resources (ease in the use of system by users)"},
    {"information_consistency_reliability", G::tactical, "Consistency and reliability of information"},
    {"return_on_investment", G::tactical, "Highest returns on investment through system usage"},
    {"user_requirements_realization", G::tactical, "Realization of user requirements"},
    {"data_model_security", G::tactical, "Security of data and models from illegal users"},
    {"documentation", G::tactical, "Documentation (formal instructions for the usage of IS)"},
    {"cost_benefit_balance", G::tactical, "Balance between cost and benefit of computer based products/services"},
    {"user_training", G::tactical, "User training"},
    {"corrective_action_flexibility", G::tactical, "Flexibility for corrective action on problematic output"},
    {"pre_implementation_testing", G::tactical, "Testing of system before implementation"},
    {"professional_maintenance_standard", G::operational, "Professional standard maintenance (H/W, S/W, O.S, accounts)"},
    {"staff_response_to_change", G::operational, "Response of staff to changes in existing system"},
    {"staff_trust_in_change", G::operational, "Trust of staff in the change for the betterment of the system"},
    {"data_input_output_method", G::operational, "The way users input data and receive output"},
    {"output_accuracy", G::operational, "Accuracy (correctness) of the output"},
    {"information_completeness", G::operational, "Completeness (comprehensiveness) of the information"},
    {"interaction_language_definition", G::operational, "Well defined language for interaction with computers"},
    {"output_volume", G::operational, "Volume of output generated by the system for a user"},
    {"user_faith_in_technology", G::operational, "Faith in technology/system by the user"},
}};

std::string_view trim(std::string_view s)
{
	while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
		s.remove_prefix(1);
	while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
		s.remove_suffix(1);
	return s;
}

} // namespace

std::string_view to_string(FactorGroup group)
{
	switch (group) {
	case FactorGroup::strategic:
		return "strategic";
	case FactorGroup::tactical:
		return "tactical";
	case FactorGroup::operational:
		return "operational";
	}
	return "unknown";
}

const std::array<Factor, factor_count> &factors() { return factor_table; }

const Factor *find_factor(std::string_view id)
{
	for (const auto &f : factor_table)
		if (f.id == id)
			return &f;
	return nullptr;
}

QuestionnaireResponse parse_questionnaire(std::istream &in)
{
	std::string line;
	if (!std::getline(in, line) || trim(line) != "factor_id,score")
		throw std::runtime_error("questionnaire header must be 'factor_id,score'");

	QuestionnaireResponse response;
	std::size_t row = 0;
	while (std::getline(in, line)) {
		const std::string_view text = trim(line);
		if (text.empty())
			continue;
		++row;
		const auto comma = text.find(',');
		if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos)
			throw std::runtime_error("row " + std::to_string(row) + ": expected 2 columns");
		const std::string_view id = trim(text.substr(0, comma));
		const std::string_view cell = trim(text.substr(comma + 1));
		if (!find_factor(id))
			throw std::runtime_error("row " + std::to_string(row) + ": unknown factor '"
			                         + std::string(id) + "'");
		double score = 0.0;
		const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), score);
		if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size()
		    || !std::isfinite(score))
			throw std::runtime_error("row " + std::to_string(row) + ": malformed score for '"
			                         + std::string(id) + "'");
		if (score < input_min || score > input_max)
			throw std::runtime_error("row " + std::to_string(row) + ": score for '" + std::string(id)
			                         + "' outside [-1, 5]");
		if (!response.scores.emplace(std::string(id), score).second)
			throw std::runtime_error("row " + std::to_string(row) + ": duplicate factor '"
			                         + std::string(id) + "'");
	}
	return response;
}

QuestionnaireResponse load_questionnaire(const std::filesystem::path &path)
{
	std::ifstream in(path);
	if (!in)
		throw std::runtime_error("cannot open questionnaire '" + path.string() + "'");
	try {
		return parse_questionnaire(in);
	} catch (const std::runtime_error &e) {
		throw std::runtime_error(path.string() + ": " + e.what());
	}
}

GroupMeans group_means(const QuestionnaireResponse &response)
{
	double sums[3] = {0.0, 0.0, 0.0};
	std::size_t counts[3] = {0, 0, 0};
	for (const auto &f : factor_table) {
		const auto it = response.scores.find(f.id);
		if (it == response.scores.end())
			throw std::runtime_error("missing factor '" + std::string(f.id) + "'");
		const auto g = static_cast<std::size_t>(f.group);
		sums[g] += it->second;
		++counts[g];
	}
	for (const auto &[id, score] : response.scores)
		if (!find_factor(id))
			throw std::runtime_error("unknown factor '" + id + "'");
	return {sums[0] / static_cast<double>(counts[0]), sums[1] / static_cast<double>(counts[1]),
	        sums[2] / static_cast<double>(counts[2])};
}

Pattern aggregate_questionnaire(const QuestionnaireResponse &response)
{
	const GroupMeans m = group_means(response);
	return {"questionnaire", m.strategic, m.tactical, m.operational, std::nullopt};
}

void write_factor_table(std::ostream &out)
{
	out << "factor_id,group,description\n";
	for (const auto &f : factor_table)
		out << f.id << ',' << to_string(f.group) << ",\"" << f.description << "\"\n";
}

} // namespace hrdiag
