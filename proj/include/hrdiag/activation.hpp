#pragma once

#include <string>
#include <string_view>

namespace hrdiag {

// Transfer functions available to a layer. Names follow the MATLAB toolbox
// convention (tansig, logsig, purelin).
enum class Activation { tansig, logsig, purelin };

// tansig(x) = 2 / (1 + exp(-2x)) - 1, evaluated through exp of a non-positive
// argument. The result is kept strictly inside (-1, 1).
double tansig(double x);

// logsig(x) = 1 / (1 + exp(-x)), kept strictly inside (0, 1).
double logsig(double x);

double activate(Activation kind, double x);

// Derivative expressed through the activation's own output value:
// tansig' = 1 - o^2, logsig' = o (1 - o), purelin' = 1.
double derivative_from_output(Activation kind, double output);

std::string_view to_string(Activation kind);

// Throws std::invalid_argument for anything other than the three names.
Activation parse_activation(std::string_view name);

} // namespace hrdiag
