#include "hrdiag/activation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hrdiag {

namespace {

constexpr double upper_open = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
constexpr double lower_open_logsig = std::numeric_limits<double>::denorm_min();

} // namespace

double tansig(double x)
{
	// expm1 of a non-positive argument: no overflow, no cancellation near 0
	const double m = std::expm1(-2.0 * std::fabs(x));
	double magnitude = -m / (2.0 + m);
	if (magnitude > upper_open)
		magnitude = upper_open;
	return x < 0.0 ? -magnitude : magnitude;
}

double logsig(double x)
{
	double value;
	if (x >= 0.0) {
		value = 1.0 / (1.0 + std::exp(-x));
	} else {
		const double e = std::exp(x);
		value = e / (1.0 + e);
	}
	if (value > upper_open)
		value = upper_open;
	if (value < lower_open_logsig)
		value = lower_open_logsig;
	return value;
}

double activate(Activation kind, double x)
{
	switch (kind) {
	case Activation::tansig:
		return tansig(x);
	case Activation::logsig:
		return logsig(x);
	case Activation::purelin:
		return x;
	}
	return x;
}

double derivative_from_output(Activation kind, double output)
{
	switch (kind) {
	case Activation::tansig:
		return 1.0 - output * output;
	case Activation::logsig:
		return output * (1.0 - output);
	case Activation::purelin:
		return 1.0;
	}
	return 1.0;
}

std::string_view to_string(Activation kind)
{
	switch (kind) {
	case Activation::tansig:
		return "tansig";
	case Activation::logsig:
		return "logsig";
	case Activation::purelin:
		return "purelin";
	}
	return "unknown";
}

Activation parse_activation(std::string_view name)
{
	if (name == "tansig")
		return Activation::tansig;
	if (name == "logsig")
		return Activation::logsig;
	if (name == "purelin")
		return Activation::purelin;
	throw std::invalid_argument("unknown activation '" + std::string(name)
	                            + "' (expected tansig, logsig or purelin)");
}

} // namespace hrdiag
