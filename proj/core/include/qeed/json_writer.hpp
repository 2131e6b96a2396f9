#pragma once

#include <string>

#include "json.hpp"

namespace qeed {

// Serializes with every floating-point number printed as %.17g, so values
// round-trip exactly and output is byte-stable across runs.
std::string dump_json(const nlohmann::json& value, int indent = 2);

// %.17g formatting of one number (used by CSV writers too).
std::string format_number(double value);

}  // namespace qeed
