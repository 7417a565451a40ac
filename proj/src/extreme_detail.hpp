#pragma once

// Internal helpers shared by the extreme-channel evaluators.

#include <span>

#include "chansim/linalg.hpp"

namespace chansim::detail {

/// out = unitary_from_params(d, block) without allocation.
void build_su(int d, std::span<const double> block, ComplexMatrix& out);

}  // namespace chansim::detail
