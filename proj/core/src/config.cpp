#include "hexcal/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hexcal/errors.hpp"

namespace hexcal {

namespace {

[[noreturn]] void fail(const std::string& name, int line, const std::string& msg) {
    throw ParseError(name + ":" + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Strips a trailing comment, respecting quoted strings.
std::string strip_comment(const std::string& s) {
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_string = !in_string;
        else if (s[i] == '#' && !in_string) return s.substr(0, i);
    }
    return s;
}

class ValueParser {
public:
    ValueParser(const std::string& text, const std::string& name, int line)
        : text_(text), name_(name), line_(line) {}

    ConfigValue parse() {
        ConfigValue v = parse_value();
        skip_ws();
        if (pos_ != text_.size()) fail(name_, line_, "trailing characters after value");
        return v;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    ConfigValue parse_value() {
        skip_ws();
        if (pos_ >= text_.size()) fail(name_, line_, "missing value");
        ConfigValue v;
        v.line = line_;
        const char c = text_[pos_];
        if (c == '[') {
            ++pos_;
            std::vector<ConfigValue> items;
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == ']') {
                ++pos_;
            } else {
                while (true) {
                    items.push_back(parse_value());
                    skip_ws();
                    if (pos_ >= text_.size()) fail(name_, line_, "unterminated array");
                    if (text_[pos_] == ',') {
                        ++pos_;
                        skip_ws();  // allow a trailing comma before ']'
                        if (pos_ < text_.size() && text_[pos_] == ']') {
                            ++pos_;
                            break;
                        }
                        continue;
                    }
                    if (text_[pos_] == ']') {
                        ++pos_;
                        break;
                    }
                    fail(name_, line_, "expected ',' or ']' in array");
                }
            }
            v.data = std::move(items);
        } else if (c == '"') {
            const std::size_t end = text_.find('"', pos_ + 1);
            if (end == std::string::npos) fail(name_, line_, "unterminated string");
            v.data = text_.substr(pos_ + 1, end - pos_ - 1);
            pos_ = end + 1;
        } else {
            std::size_t end = pos_;
            while (end < text_.size() && text_[end] != ',' && text_[end] != ']' &&
                   !std::isspace(static_cast<unsigned char>(text_[end]))) {
                ++end;
            }
            const std::string token = text_.substr(pos_, end - pos_);
            char* parse_end = nullptr;
            const double num = std::strtod(token.c_str(), &parse_end);
            if (token.empty() || parse_end != token.c_str() + token.size()) {
                fail(name_, line_, "not a number: '" + token + "'");
            }
            v.data = num;
            pos_ = end;
        }
        return v;
    }

    const std::string& text_;
    const std::string& name_;
    int line_;
    std::size_t pos_ = 0;
};

int bracket_depth_delta(const std::string& s) {
    int depth = 0;
    bool in_string = false;
    for (char c : s) {
        if (c == '"') in_string = !in_string;
        else if (!in_string && c == '[') ++depth;
        else if (!in_string && c == ']') --depth;
    }
    return depth;
}

bool valid_key(const std::string& key) {
    if (key.empty()) return false;
    for (char c : key) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    }
    return true;
}

}  // namespace

double ConfigValue::as_number(const std::string& where) const {
    if (!is_number()) fail(where, line, "expected a number");
    return std::get<double>(data);
}

const std::string& ConfigValue::as_string(const std::string& where) const {
    if (!is_string()) fail(where, line, "expected a quoted string");
    return std::get<std::string>(data);
}

const std::vector<ConfigValue>& ConfigValue::as_array(const std::string& where) const {
    if (!is_array()) fail(where, line, "expected an array");
    return std::get<std::vector<ConfigValue>>(data);
}

std::vector<double> ConfigValue::as_number_array(const std::string& where,
                                                 std::size_t arity) const {
    const auto& items = as_array(where);
    if (items.size() != arity) {
        fail(where, line,
             "expected " + std::to_string(arity) + " entries, got " + std::to_string(items.size()));
    }
    std::vector<double> out;
    out.reserve(items.size());
    for (const auto& item : items) out.push_back(item.as_number(where));
    return out;
}

ConfigFile parse_config_text(const std::string& text, const std::string& name) {
    ConfigFile file;
    file.name = name;
    ConfigSection* current = &file.root;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;

        if (line.front() == '[' && line.back() == ']' && bracket_depth_delta(line) == 0 &&
            line.find('=') == std::string::npos && line.find(',') == std::string::npos) {
            const std::string section_name = trim(line.substr(1, line.size() - 2));
            if (!valid_key(section_name)) fail(name, line_no, "invalid section name");
            if (file.sections.contains(section_name)) {
                fail(name, line_no, "duplicate section '" + section_name + "'");
            }
            current = &file.sections[section_name];
            current->line = line_no;
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(name, line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        if (!valid_key(key)) fail(name, line_no, "invalid key '" + key + "'");
        if (current->values.contains(key)) fail(name, line_no, "duplicate key '" + key + "'");

        const int value_line = line_no;
        std::string value_text = line.substr(eq + 1);
        int depth = bracket_depth_delta(value_text);
        while (depth > 0 && std::getline(in, raw)) {
            ++line_no;
            const std::string more = strip_comment(raw);
            value_text += "\n" + more;
            depth += bracket_depth_delta(more);
        }
        if (depth != 0) fail(name, value_line, "unbalanced brackets");

        ConfigValue value = ValueParser(value_text, name, value_line).parse();
        current->values.emplace(key, std::move(value));
    }
    return file;
}

ConfigFile parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

}  // namespace hexcal
