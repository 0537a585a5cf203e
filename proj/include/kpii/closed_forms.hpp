#pragma once

#include <optional>
#include <utility>

#include "kpii/geometry.hpp"

namespace kpii {

// Closed-form stem endpoints for the cases where they are known, provided
// the catalog's stem matches the formula's stem.
std::optional<std::pair<Vec2, Vec2>> closed_form_endpoints(const ResonantSolution& sol,
                                                           const Label& stem, double t);
std::optional<double> closed_form_length(const ResonantSolution& sol, const Label& stem, double t);

}  // namespace kpii
