#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace longeval::csv {

using Row = std::vector<std::string>;

/// One CSV record with its 1-based source line.
struct Record {
  std::size_t line = 0;
  Row fields;
};

/// Reads RFC 4180 CSV (quoted fields, doubled quotes). Blank lines are skipped.
/// `source` names the input in ParseError messages.
std::vector<Record> read(std::istream& in, const std::string& source);
std::vector<Record> read_file(const std::string& path);

/// Quotes a field when it contains a comma, quote or newline.
std::string escape(std::string_view field);
void write_row(std::ostream& out, const Row& row);

/// Shortest decimal representation that round-trips.
std::string format_number(double value);

/// Strict parse of a full field as a finite double.
std::optional<double> parse_number(std::string_view field);
std::optional<long long> parse_integer(std::string_view field);

}  // namespace longeval::csv
