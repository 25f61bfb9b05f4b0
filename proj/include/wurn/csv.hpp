#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace wurn::csv {

/// Split one CSV record. Handles double-quoted fields with embedded commas
/// and doubled quotes; no multi-line fields.
std::vector<std::string> split(std::string_view line);

/// Read the next non-empty line, stripping a trailing '\r'. Returns false at
/// end of input.
bool next_line(std::istream& in, std::string& line);

/// Parse a double, throwing std::invalid_argument on trailing garbage.
double to_double(std::string const& field);

/// Parse an int, throwing std::invalid_argument on trailing garbage.
int to_int(std::string const& field);

/// Quote a field if it contains a comma, quote or leading/trailing space.
std::string quote(std::string const& field);

}  // namespace wurn::csv
