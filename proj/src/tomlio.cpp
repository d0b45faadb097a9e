#include "enplan/tomlio.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace enplan::toml {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

Value parse_scalar(const std::string& raw, const std::string& where) {
    Value v;
    std::string s = trim(raw);
    if (s.empty()) throw std::runtime_error(where + ": empty value");
    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"')
            throw std::runtime_error(where + ": unterminated string");
        v.kind = Value::Kind::String;
        v.str = s.substr(1, s.size() - 2);
        return v;
    }
    if (s == "true" || s == "false") {
        v.kind = Value::Kind::Boolean;
        v.boolean = (s == "true");
        return v;
    }
    if (s == "inf" || s == "+inf") {
        v.kind = Value::Kind::Number;
        v.num = std::numeric_limits<double>::infinity();
        return v;
    }
    char* end = nullptr;
    double d = std::strtod(s.c_str(), &end);
    if (end == s.c_str() + s.size()) {
        v.kind = Value::Kind::Number;
        v.num = d;
        return v;
    }
    throw std::runtime_error(where + ": cannot parse value '" + s + "'");
}

Value parse_value(const std::string& raw, const std::string& where) {
    std::string s = trim(raw);
    if (!s.empty() && s.front() == '[') {
        if (s.back() != ']') throw std::runtime_error(where + ": unterminated array");
        Value v;
        v.kind = Value::Kind::Array;
        std::string inner = s.substr(1, s.size() - 2);
        std::string item;
        bool quoted = false;
        for (char c : inner) {
            if (c == '"') quoted = !quoted;
            if (c == ',' && !quoted) {
                if (!trim(item).empty()) v.array.push_back(parse_scalar(item, where));
                item.clear();
            } else {
                item += c;
            }
        }
        if (!trim(item).empty()) v.array.push_back(parse_scalar(item, where));
        return v;
    }
    return parse_scalar(s, where);
}

}  // namespace

Document Document::parse_string(const std::string& text, const std::string& source) {
    Document doc;
    doc.source_ = source;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string where = source + ":" + std::to_string(lineno);
        std::string s = trim(strip_comment(line));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']' || s.size() < 3)
                throw std::runtime_error(where + ": malformed section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section.empty()) throw std::runtime_error(where + ": empty section name");
            continue;
        }
        auto eq = s.find('=');
        if (eq == std::string::npos) throw std::runtime_error(where + ": expected key = value");
        std::string key = trim(s.substr(0, eq));
        if (key.empty()) throw std::runtime_error(where + ": empty key");
        std::string full = section.empty() ? key : section + "." + key;
        doc.values_[full] = parse_value(s.substr(eq + 1), where);
    }
    return doc;
}

Document Document::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path.filename().string());
}

bool Document::has(const std::string& key) const { return values_.count(key) > 0; }

const Value& Document::require(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end())
        throw std::runtime_error(source_ + ": missing required key '" + key + "'");
    return it->second;
}

std::string Document::get_string(const std::string& key) const {
    const Value& v = require(key);
    if (v.kind != Value::Kind::String)
        throw std::runtime_error(source_ + ": key '" + key + "' is not a string");
    return v.str;
}

std::string Document::get_string_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

double Document::get_double(const std::string& key) const {
    const Value& v = require(key);
    if (v.kind != Value::Kind::Number)
        throw std::runtime_error(source_ + ": key '" + key + "' is not a number");
    return v.num;
}

double Document::get_double_or(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

long Document::get_int(const std::string& key) const {
    double d = get_double(key);
    long r = static_cast<long>(std::llround(d));
    if (std::abs(d - static_cast<double>(r)) > 1e-9)
        throw std::runtime_error(source_ + ": key '" + key + "' is not an integer");
    return r;
}

long Document::get_int_or(const std::string& key, long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

bool Document::get_bool_or(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const Value& v = require(key);
    if (v.kind != Value::Kind::Boolean)
        throw std::runtime_error(source_ + ": key '" + key + "' is not a boolean");
    return v.boolean;
}

std::vector<double> Document::get_double_array(const std::string& key) const {
    const Value& v = require(key);
    if (v.kind != Value::Kind::Array)
        throw std::runtime_error(source_ + ": key '" + key + "' is not an array");
    std::vector<double> out;
    for (const auto& e : v.array) {
        if (e.kind != Value::Kind::Number)
            throw std::runtime_error(source_ + ": key '" + key + "' has non-numeric elements");
        out.push_back(e.num);
    }
    return out;
}

std::vector<std::string> Document::get_string_array(const std::string& key) const {
    const Value& v = require(key);
    if (v.kind != Value::Kind::Array)
        throw std::runtime_error(source_ + ": key '" + key + "' is not an array");
    std::vector<std::string> out;
    for (const auto& e : v.array) {
        if (e.kind != Value::Kind::String)
            throw std::runtime_error(source_ + ": key '" + key + "' has non-string elements");
        out.push_back(e.str);
    }
    return out;
}

}  // namespace enplan::toml
