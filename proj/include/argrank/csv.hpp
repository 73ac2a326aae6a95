#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace argrank::csv {

// RFC-4180 CSV: quoted fields may contain commas, quotes (doubled) and
// newlines. All canonical files carry a header row.

struct Row {
    std::vector<std::string> fields;
    std::size_t line = 0;  // 1-based line where the record started
};

struct Table {
    std::vector<std::string> header;
    std::vector<Row> rows;

    // Column index lookup; throws IoError listing available headers if absent.
    std::size_t column(const std::string& name, const std::string& file) const;
    std::optional<std::size_t> find_column(const std::string& name) const;
};

Table parse(const std::string& text, const std::string& file_for_errors);
Table read_file(const std::string& path);

std::string escape_field(const std::string& field);
std::string format_row(const std::vector<std::string>& fields);

void write_file(const std::string& path, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows);

// Doubles serialized with enough digits to round-trip bit-exactly.
std::string format_double(double v);

}  // namespace argrank::csv
