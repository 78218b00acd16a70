#pragma once

#include <string>

namespace uavplan {

// Shortest text that parses back to the same double; "inf"/"-inf"/"nan".
std::string fmt_num(double v);

// Quotes a CSV field when needed.
std::string csv_field(const std::string& s);

}  // namespace uavplan
