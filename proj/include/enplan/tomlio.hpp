// Minimal TOML-subset reader for scenario and sweep configuration files.
// Supports [dotted.sections], key = value with strings, numbers, booleans
// and single-line arrays, plus '#' comments. That is all the configs use.
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace enplan::toml {

struct Value {
    enum class Kind { String, Number, Boolean, Array };
    Kind kind = Kind::String;
    std::string str;
    double num = 0.0;
    bool boolean = false;
    std::vector<Value> array;
};

class Document {
public:
    static Document parse_file(const std::filesystem::path& path);
    static Document parse_string(const std::string& text, const std::string& source);

    bool has(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    std::string get_string_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
    long get_int(const std::string& key) const;
    long get_int_or(const std::string& key, long fallback) const;
    bool get_bool_or(const std::string& key, bool fallback) const;
    std::vector<double> get_double_array(const std::string& key) const;
    std::vector<std::string> get_string_array(const std::string& key) const;

    const std::map<std::string, Value>& entries() const { return values_; }

private:
    const Value& require(const std::string& key) const;
    std::string source_;
    std::map<std::string, Value> values_;  // flattened "section.key" -> value
};

}  // namespace enplan::toml
