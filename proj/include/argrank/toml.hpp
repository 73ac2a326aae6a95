#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace argrank::toml {

// Minimal TOML subset used by the config files in this project: [section]
// tables (dotted section names allowed), `key = value` entries with string,
// integer, float, boolean and flat-array values, and # comments. Keys are
// addressed as "section.key". Multi-line strings, inline tables and arrays
// of tables are out of scope.

using Value = std::variant<std::string, std::int64_t, double, bool,
                           std::vector<std::int64_t>, std::vector<std::string>>;

class Document {
public:
    static Document parse(const std::string& text, const std::string& file);
    static Document parse_file(const std::string& path);

    bool contains(const std::string& key) const { return values_.contains(key); }

    std::optional<std::string> get_string(const std::string& key) const;
    std::optional<std::int64_t> get_int(const std::string& key) const;
    std::optional<double> get_double(const std::string& key) const;
    std::optional<bool> get_bool(const std::string& key) const;
    std::optional<std::vector<std::int64_t>> get_int_array(const std::string& key) const;
    std::optional<std::vector<std::string>> get_string_array(const std::string& key) const;

    // Keys under "prefix." in document order.
    std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

private:
    std::map<std::string, Value> values_;
    std::vector<std::string> ordered_keys_;
};

}  // namespace argrank::toml
