#pragma once

#include <string>
#include <vector>

namespace sdgnet::csv {

// Splits one line on commas. Fields are taken verbatim: the formats this
// toolkit defines never quote or embed separators.
std::vector<std::string> split(const std::string& line);

// Removes a trailing '\r' (CRLF tolerance).
void strip_cr(std::string& line);

// Strict full-field numeric parses; return false on any leftover characters.
bool parse_int(const std::string& field, int& out);
bool parse_double(const std::string& field, double& out);

// Fixed-point formatting used for all numeric CSV cells.
std::string fixed(double value, int digits);

}  // namespace sdgnet::csv
