#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace enpp::csv {

/// RFC 4180 field quoting: fields containing a comma, a double quote, CR or
/// LF are wrapped in double quotes with embedded quotes doubled.
std::string escape(std::string_view field);

/// Shortest decimal that round-trips to the same double; "inf", "-inf", "nan"
/// for non-finite values.
std::string format_number(double value);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Parse RFC 4180 text into rows. Accepts both CRLF and LF line endings.
std::vector<std::vector<std::string>> parse(std::string_view text);

}  // namespace enpp::csv
