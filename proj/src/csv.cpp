#include "argrank/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "argrank/errors.hpp"

namespace argrank::csv {

std::optional<std::size_t> Table::find_column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    return std::nullopt;
}

std::size_t Table::column(const std::string& name, const std::string& file) const {
    if (auto idx = find_column(name)) return *idx;
    std::string available;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) available += ", ";
        available += header[i];
    }
    throw IoError(file + ": missing column '" + name + "' (available: " + available + ")");
}

Table parse(const std::string& text, const std::string& file) {
    Table table;
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t line = 1;
    std::size_t record_line = 1;

    auto flush_field = [&] {
        fields.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto flush_record = [&] {
        flush_field();
        if (table.header.empty()) {
            table.header = std::move(fields);
        } else {
            if (fields.size() != table.header.size()) {
                throw IoError(file + ":" + std::to_string(record_line) + ": expected " +
                              std::to_string(table.header.size()) + " fields, got " +
                              std::to_string(fields.size()));
            }
            table.rows.push_back(Row{std::move(fields), record_line});
        }
        fields = {};
        record_line = line;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
        } else {
            switch (c) {
                case '"':
                    if (field.empty() && !field_started) {
                        in_quotes = true;
                        field_started = true;
                    } else {
                        throw IoError(file + ":" + std::to_string(line) +
                                      ": stray quote inside unquoted field");
                    }
                    break;
                case ',':
                    flush_field();
                    break;
                case '\r':
                    break;
                case '\n':
                    ++line;
                    flush_record();
                    break;
                default:
                    field += c;
                    field_started = true;
                    break;
            }
        }
    }
    if (in_quotes) {
        throw IoError(file + ":" + std::to_string(record_line) + ": unterminated quoted field");
    }
    // Final record without trailing newline.
    if (field_started || !field.empty() || !fields.empty()) flush_record();

    if (table.header.empty()) throw IoError(file + ": empty file, header row required");
    return table;
}

Table read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

std::string escape_field(const std::string& field) {
    const bool needs_quotes =
        field.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string format_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += escape_field(fields[i]);
    }
    out += '\n';
    return out;
}

void write_file(const std::string& path, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << format_row(header);
    for (const auto& row : rows) out << format_row(row);
    if (!out) throw IoError("write failed: " + path);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace argrank::csv
