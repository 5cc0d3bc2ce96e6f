#pragma once

namespace hrdiag {

// Selects between the OpenMP kernel and its serial reference. Both produce
// bit-identical results; the serial path exists for testing and small inputs.
enum class Execution { serial, parallel };

} // namespace hrdiag
