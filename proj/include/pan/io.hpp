#pragma once

#include <string>

#include "pan/poisson_field.hpp"

namespace pan {

// Shortest decimal with 17 significant digits (bit-faithful round trip).
std::string fmt17(double v);

void dump_field_json(const PoissonField& field, const std::string& path);
PoissonField load_field_json(const std::string& path);

} // namespace pan
