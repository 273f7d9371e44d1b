#pragma once

#include <string>
#include <vector>

namespace expmoment {

// Shortest representation carrying 12 significant digits.
std::string format_double(double v);

// Reads a whole file; the path "-" reads stdin instead.
std::string read_text_input(const std::string& path);

// Splits CSV text into trimmed cells. Blank lines are dropped. No quoting:
// the formats used here never embed commas in cells.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

double parse_double(const std::string& cell);  // throws on trailing garbage

}  // namespace expmoment
