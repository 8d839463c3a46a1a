#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace hexcal {

// Line-oriented key-value format with [section] headers and (nested) arrays:
//
//   # comment
//   leg_min_mm = 500
//   base_joints = [
//     [386.37, -103.53, 0.0],
//     ...
//   ]
//   [noise]
//   position_sigma_mm = 0.14
//
// Values are numbers, quoted strings, or arrays; arrays may span lines.
// Every value remembers its line so loaders can reject missing fields and
// wrong arities with a file:line message.

struct ConfigValue {
    int line = 0;
    std::variant<double, std::string, std::vector<ConfigValue>> data;

    bool is_number() const { return std::holds_alternative<double>(data); }
    bool is_string() const { return std::holds_alternative<std::string>(data); }
    bool is_array() const { return std::holds_alternative<std::vector<ConfigValue>>(data); }

    // Checked accessors; `where` is the file name used in error messages.
    double as_number(const std::string& where) const;
    const std::string& as_string(const std::string& where) const;
    const std::vector<ConfigValue>& as_array(const std::string& where) const;
    std::vector<double> as_number_array(const std::string& where, std::size_t arity) const;
};

struct ConfigSection {
    int line = 1;  // header line, or 1 for the root section
    std::map<std::string, ConfigValue> values;
};

struct ConfigFile {
    std::string name;  // for error messages
    ConfigSection root;
    std::map<std::string, ConfigSection> sections;
};

ConfigFile parse_config_text(const std::string& text, const std::string& name);
ConfigFile parse_config_file(const std::string& path);

}  // namespace hexcal
