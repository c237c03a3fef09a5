#pragma once

#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

namespace tunnelkit {

// 9 significant digits, scientific notation, lowercase exponent: 1.31640000e-16
std::string format_double(double value);

// Deterministic JSON text: sorted keys, two-space indent, floats via format_double.
std::string to_json_text(const nlohmann::json& value, int indent = 2);
void write_json(std::ostream& os, const nlohmann::json& value);

}  // namespace tunnelkit
