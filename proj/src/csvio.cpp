#include "enplan/csvio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace enplan::csv {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void fail(const std::string& source, std::size_t row, const std::string& what) {
    throw std::runtime_error(source + ", data row " + std::to_string(row + 1) + ": " + what);
}

}  // namespace

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(trim(field));
            field.clear();
        } else {
            field += c;
        }
    }
    out.push_back(trim(field));
    return out;
}

Table parse(std::istream& in, const std::string& source) {
    Table t;
    t.source = source;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        auto fields = split_line(line);
        if (!have_header) {
            t.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != t.header.size()) {
            throw std::runtime_error(source + ": row with " + std::to_string(fields.size()) +
                                     " fields, header has " + std::to_string(t.header.size()));
        }
        t.rows.push_back(std::move(fields));
    }
    if (!have_header) throw std::runtime_error(source + ": empty file, no header row");
    return t;
}

Table read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return parse(in, path.filename().string());
}

std::size_t Table::col(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
        throw std::runtime_error(source + ": missing required column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

long Table::col_optional(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<long>(it - header.begin());
}

const std::string& Table::cell(std::size_t row, std::size_t col) const {
    return rows.at(row).at(col);
}

bool Table::empty_cell(std::size_t row, std::size_t col) const {
    return rows.at(row).at(col).empty();
}

double Table::num(std::size_t row, std::size_t col) const {
    const std::string& s = cell(row, col);
    if (s.empty()) fail(source, row, "empty numeric field in column '" + header[col] + "'");
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size())
        fail(source, row, "bad number '" + s + "' in column '" + header[col] + "'");
    return v;
}

double Table::num_or(std::size_t row, long col, double fallback) const {
    if (col < 0) return fallback;
    if (empty_cell(row, static_cast<std::size_t>(col))) return fallback;
    return num(row, static_cast<std::size_t>(col));
}

long Table::integer(std::size_t row, std::size_t col) const {
    double v = num(row, col);
    long r = static_cast<long>(std::llround(v));
    if (std::abs(v - static_cast<double>(r)) > 1e-9)
        fail(source, row, "expected integer in column '" + header[col] + "'");
    return r;
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace enplan::csv
