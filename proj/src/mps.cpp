#include "enplan/mps.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "enplan/csvio.hpp"

namespace enplan::mps {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shortens to eight characters; on collision the name becomes 'X' plus a
// seven-digit ordinal, which cannot collide with anything else because a
// fresh ordinal is drawn until free.
class ShortNames {
public:
    std::string assign(const std::string& full) {
        std::string candidate = full.substr(0, 8);
        if (candidate.empty()) candidate = "X";
        if (used_.insert(candidate).second) return candidate;
        for (;;) {
            char buf[16];
            std::snprintf(buf, sizeof(buf), "X%07d", counter_++);
            std::string alt(buf);
            if (used_.insert(alt).second) return alt;
        }
    }

private:
    std::set<std::string> used_;
    int counter_ = 0;
};

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

char sense_char(lp::Sense s) {
    switch (s) {
        case lp::Sense::LessEqual: return 'L';
        case lp::Sense::Equal: return 'E';
        case lp::Sense::GreaterEqual: return 'G';
    }
    return 'E';
}

lp::Sense sense_from(char c) {
    switch (c) {
        case 'L': return lp::Sense::LessEqual;
        case 'E': return lp::Sense::Equal;
        case 'G': return lp::Sense::GreaterEqual;
    }
    throw std::runtime_error(std::string("unknown row sense '") + c + "'");
}

std::vector<std::string> tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string t;
    while (is >> t) out.push_back(t);
    return out;
}

double parse_num(const std::string& s) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) throw std::runtime_error("bad MPS number '" + s + "'");
    return v;
}

}  // namespace

ExportResult export_mps(const lp::LpInstance& inst) {
    ExportResult result;
    ShortNames names;
    std::vector<std::string> row_name(static_cast<std::size_t>(inst.num_rows()));
    std::vector<std::string> col_name(static_cast<std::size_t>(inst.num_vars()));

    std::ostringstream os;
    os << "NAME          " << inst.name.substr(0, 8) << '\n';
    os << "ROWS\n";
    os << " N  COST\n";
    for (int i = 0; i < inst.num_rows(); ++i) {
        const auto& r = inst.row(i);
        row_name[static_cast<std::size_t>(i)] = names.assign(r.name);
        result.names.rows.emplace_back(row_name[static_cast<std::size_t>(i)], r.name);
        os << ' ' << sense_char(r.sense) << "  " << row_name[static_cast<std::size_t>(i)] << '\n';
    }

    // Column-major entry lists in row order.
    std::vector<std::vector<std::pair<int, double>>> col_entries(
        static_cast<std::size_t>(inst.num_vars()));
    for (int i = 0; i < inst.num_rows(); ++i)
        for (const auto& e : inst.row(i).entries)
            col_entries[static_cast<std::size_t>(e.var)].emplace_back(i, e.coef);

    os << "COLUMNS\n";
    for (int j = 0; j < inst.num_vars(); ++j) {
        const auto& v = inst.variable(j);
        col_name[static_cast<std::size_t>(j)] = names.assign(v.name);
        result.names.columns.emplace_back(col_name[static_cast<std::size_t>(j)], v.name);
        const std::string& cn = col_name[static_cast<std::size_t>(j)];
        if (v.objective != 0.0)
            os << "    " << pad(cn, 9) << ' ' << pad("COST", 9) << ' '
               << csv::format_double(v.objective) << '\n';
        for (const auto& [row, coef] : col_entries[static_cast<std::size_t>(j)])
            os << "    " << pad(cn, 9) << ' '
               << pad(row_name[static_cast<std::size_t>(row)], 9) << ' '
               << csv::format_double(coef) << '\n';
    }

    os << "RHS\n";
    for (int i = 0; i < inst.num_rows(); ++i) {
        if (inst.row(i).rhs != 0.0)
            os << "    " << pad("RHS", 9) << ' ' << pad(row_name[static_cast<std::size_t>(i)], 9)
               << ' ' << csv::format_double(inst.row(i).rhs) << '\n';
    }

    os << "BOUNDS\n";
    for (int j = 0; j < inst.num_vars(); ++j) {
        const auto& v = inst.variable(j);
        const std::string& cn = col_name[static_cast<std::size_t>(j)];
        auto bound = [&os, &cn](const char* type, double value, bool with_value) {
            os << ' ' << pad(type, 2) << ' ' << pad("BND", 9) << ' ' << pad(cn, 9);
            if (with_value) os << ' ' << csv::format_double(value);
            os << '\n';
        };
        bool lo_inf = v.lower == -kInf, up_inf = v.upper == kInf;
        if (lo_inf && up_inf) {
            bound("FR", 0.0, false);
        } else if (lo_inf) {
            bound("MI", 0.0, false);
            bound("UP", v.upper, true);
        } else if (v.lower == v.upper) {
            bound("FX", v.lower, true);
        } else {
            if (v.lower != 0.0) bound("LO", v.lower, true);
            if (!up_inf) bound("UP", v.upper, true);
        }
    }
    os << "ENDATA\n";
    result.text = os.str();
    return result;
}

lp::LpInstance parse_mps(const std::string& text) {
    lp::LpInstance inst;
    std::istringstream in(text);
    std::string line;
    enum class Section { None, Rows, Columns, Rhs, Bounds, Done } section = Section::None;
    std::string objective_row = "COST";
    bool saw_name = false;

    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '*') continue;
        if (line[0] != ' ') {
            auto tok = tokens(line);
            const std::string& head = tok[0];
            if (head == "NAME") {
                inst.name = tok.size() > 1 ? tok[1] : "LP";
                saw_name = true;
            } else if (head == "ROWS") {
                section = Section::Rows;
            } else if (head == "COLUMNS") {
                section = Section::Columns;
            } else if (head == "RHS") {
                section = Section::Rhs;
            } else if (head == "RANGES") {
                throw std::runtime_error("MPS RANGES sections are not supported");
            } else if (head == "BOUNDS") {
                section = Section::Bounds;
            } else if (head == "ENDATA") {
                section = Section::Done;
                break;
            } else {
                throw std::runtime_error("unknown MPS section '" + head + "'");
            }
            continue;
        }
        auto tok = tokens(line);
        if (tok.empty()) continue;
        switch (section) {
            case Section::Rows: {
                if (tok.size() != 2) throw std::runtime_error("malformed ROWS line: " + line);
                if (tok[0] == "N") {
                    objective_row = tok[1];
                } else {
                    inst.add_row(tok[1], sense_from(tok[0][0]), 0.0, {});
                }
                break;
            }
            case Section::Columns: {
                if (tok.size() != 3 && tok.size() != 5)
                    throw std::runtime_error("malformed COLUMNS line: " + line);
                int var = inst.find_variable(tok[0]);
                if (var < 0) var = inst.add_variable(tok[0], 0.0, kInf, 0.0, {}, -1);
                for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
                    double value = parse_num(tok[k + 1]);
                    if (tok[k] == objective_row) {
                        inst.variable(var).objective = value;
                    } else {
                        int row = inst.find_row(tok[k]);
                        if (row < 0)
                            throw std::runtime_error("COLUMNS references unknown row '" + tok[k] +
                                                     "'");
                        inst.add_entry(row, var, value);
                    }
                }
                break;
            }
            case Section::Rhs: {
                if (tok.size() != 3 && tok.size() != 5)
                    throw std::runtime_error("malformed RHS line: " + line);
                for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
                    int row = inst.find_row(tok[k]);
                    if (row < 0)
                        throw std::runtime_error("RHS references unknown row '" + tok[k] + "'");
                    inst.row(row).rhs = parse_num(tok[k + 1]);
                }
                break;
            }
            case Section::Bounds: {
                if (tok.size() < 3) throw std::runtime_error("malformed BOUNDS line: " + line);
                const std::string& type = tok[0];
                int var = inst.find_variable(tok[2]);
                if (var < 0)
                    throw std::runtime_error("BOUNDS references unknown column '" + tok[2] + "'");
                auto& v = inst.variable(var);
                if (type == "FR") {
                    v.lower = -kInf;
                    v.upper = kInf;
                } else if (type == "MI") {
                    v.lower = -kInf;
                } else if (type == "PL") {
                    v.upper = kInf;
                } else {
                    if (tok.size() != 4)
                        throw std::runtime_error("malformed BOUNDS line: " + line);
                    double value = parse_num(tok[3]);
                    if (type == "LO") v.lower = value;
                    else if (type == "UP") v.upper = value;
                    else if (type == "FX") v.lower = v.upper = value;
                    else throw std::runtime_error("unsupported bound type '" + type + "'");
                }
                break;
            }
            case Section::None:
            case Section::Done:
                break;
        }
    }
    if (!saw_name) throw std::runtime_error("MPS input has no NAME record");
    if (section != Section::Done) throw std::runtime_error("MPS input has no ENDATA record");
    return inst;
}

}  // namespace enplan::mps
