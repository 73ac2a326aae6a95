#include "argrank/toml.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "argrank/core.hpp"
#include "argrank/errors.hpp"

namespace argrank::toml {

namespace {

std::string parse_quoted(const std::string& raw, const std::string& where) {
    if (raw.size() < 2 || raw.back() != raw.front()) {
        throw IoError(where + ": unterminated string " + raw);
    }
    const char quote = raw.front();
    std::string out;
    for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
        const char c = raw[i];
        if (quote == '"' && c == '\\') {
            if (i + 2 >= raw.size() + 1) throw IoError(where + ": dangling escape");
            const char esc = raw[++i];
            switch (esc) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case 'r': out += '\r'; break;
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                default:
                    throw IoError(where + ": unsupported escape \\" + std::string(1, esc));
            }
        } else {
            out += c;
        }
    }
    return out;
}

Value parse_scalar(const std::string& raw, const std::string& where) {
    if (raw.empty()) throw IoError(where + ": empty value");
    if (raw.front() == '"' || raw.front() == '\'') {
        return parse_quoted(raw, where);
    }
    if (raw == "true") return true;
    if (raw == "false") return false;

    const bool looks_float = raw.find_first_of(".eE") != std::string::npos &&
                             raw.find_first_not_of("+-0123456789.eE") == std::string::npos;
    if (looks_float) {
        try {
            return std::stod(raw);
        } catch (...) {
            throw IoError(where + ": bad float " + raw);
        }
    }
    std::int64_t intval = 0;
    const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), intval);
    if (ec == std::errc() && ptr == raw.data() + raw.size()) return intval;
    throw IoError(where + ": cannot parse value " + raw);
}

Value parse_array(const std::string& raw, const std::string& where) {
    // raw is "[ ... ]"
    std::vector<std::string> parts;
    std::string current;
    bool in_string = false;
    char quote = 0;
    for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
        const char c = raw[i];
        if (in_string) {
            current += c;
            if (c == quote && raw[i - 1] != '\\') in_string = false;
        } else if (c == '"' || c == '\'') {
            in_string = true;
            quote = c;
            current += c;
        } else if (c == ',') {
            parts.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    if (!trim_copy(current).empty()) parts.push_back(current);

    std::vector<std::int64_t> ints;
    std::vector<std::string> strings;
    bool all_ints = true;
    for (auto& part : parts) {
        const std::string trimmed = trim_copy(part);
        if (trimmed.empty()) throw IoError(where + ": empty array element");
        const Value v = parse_scalar(trimmed, where);
        if (std::holds_alternative<std::int64_t>(v)) {
            ints.push_back(std::get<std::int64_t>(v));
            strings.push_back(std::to_string(std::get<std::int64_t>(v)));
        } else if (std::holds_alternative<std::string>(v)) {
            all_ints = false;
            strings.push_back(std::get<std::string>(v));
        } else {
            throw IoError(where + ": arrays may hold only strings or integers");
        }
    }
    if (all_ints) return ints;
    return strings;
}

}  // namespace

Document Document::parse(const std::string& text, const std::string& file) {
    Document doc;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string where = file + ":" + std::to_string(line_no);

        // Strip comments outside strings.
        bool in_string = false;
        char quote = 0;
        std::string stripped;
        for (const char c : line) {
            if (in_string) {
                stripped += c;
                if (c == quote) in_string = false;
            } else if (c == '"' || c == '\'') {
                in_string = true;
                quote = c;
                stripped += c;
            } else if (c == '#') {
                break;
            } else {
                stripped += c;
            }
        }
        const std::string trimmed = trim_copy(stripped);
        if (trimmed.empty()) continue;

        if (trimmed.front() == '[') {
            if (trimmed.back() != ']') throw IoError(where + ": unterminated section header");
            section = trim_copy(trimmed.substr(1, trimmed.size() - 2));
            if (section.empty()) throw IoError(where + ": empty section name");
            continue;
        }

        const auto eq = trimmed.find('=');
        if (eq == std::string::npos) throw IoError(where + ": expected key = value");
        const std::string key_part = trim_copy(trimmed.substr(0, eq));
        const std::string value_part = trim_copy(trimmed.substr(eq + 1));
        if (key_part.empty()) throw IoError(where + ": empty key");

        const std::string full_key = section.empty() ? key_part : section + "." + key_part;
        Value value = value_part.front() == '['
                          ? parse_array(value_part, where)
                          : parse_scalar(value_part, where);
        if (!doc.values_.emplace(full_key, std::move(value)).second) {
            throw IoError(where + ": duplicate key " + full_key);
        }
        doc.ordered_keys_.push_back(full_key);
    }
    return doc;
}

Document Document::parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

std::optional<std::string> Document::get_string(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
    throw IoError("config key " + key + " is not a string");
}

std::optional<std::int64_t> Document::get_int(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    if (const auto* v = std::get_if<std::int64_t>(&it->second)) return *v;
    throw IoError("config key " + key + " is not an integer");
}

std::optional<double> Document::get_double(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    if (const auto* v = std::get_if<double>(&it->second)) return *v;
    if (const auto* v = std::get_if<std::int64_t>(&it->second)) {
        return static_cast<double>(*v);
    }
    throw IoError("config key " + key + " is not a number");
}

std::optional<bool> Document::get_bool(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    if (const auto* v = std::get_if<bool>(&it->second)) return *v;
    throw IoError("config key " + key + " is not a boolean");
}

std::optional<std::vector<std::int64_t>> Document::get_int_array(
    const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    if (const auto* v = std::get_if<std::vector<std::int64_t>>(&it->second)) return *v;
    throw IoError("config key " + key + " is not an integer array");
}

std::optional<std::vector<std::string>> Document::get_string_array(
    const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    if (const auto* v = std::get_if<std::vector<std::string>>(&it->second)) return *v;
    if (const auto* v = std::get_if<std::vector<std::int64_t>>(&it->second)) {
        std::vector<std::string> out;
        for (const auto i : *v) out.push_back(std::to_string(i));
        return out;
    }
    throw IoError("config key " + key + " is not a string array");
}

std::vector<std::string> Document::keys_with_prefix(const std::string& prefix) const {
    std::vector<std::string> out;
    const std::string full = prefix + ".";
    for (const auto& key : ordered_keys_) {
        if (key.starts_with(full)) out.push_back(key);
    }
    return out;
}

}  // namespace argrank::toml
