#pragma once

/// MPS reader/writer.
///
/// Accepts fixed- and free-format MPS (fields are taken as whitespace-separated
/// tokens, which covers both layouts as long as names contain no blanks).
/// Supported sections: NAME, OBJSENSE, ROWS, COLUMNS (with INTORG/INTEND
/// markers), RHS, RANGES, BOUNDS, ENDATA. SOS sections are rejected as
/// unsupported rather than skipped.

#include <array>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

#include "mipsym/mip.hpp"

namespace mipsym {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {

inline std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

inline std::string upper(std::string s) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

inline double parse_number(const std::string& tok, int lineno) {
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        throw ParseError("line " + std::to_string(lineno) + ": invalid number '" + tok + "'");
    return v;
}

}  // namespace detail

/// Parses an MPS stream into a canonical MipInstance. MPS defaults are
/// applied: lower bound 0, upper bound +inf, the first N row is the
/// objective. Additional N rows are dropped with a warning. RANGES rows are
/// expanded into two constraints. Duplicate coefficient entries and unknown
/// row/column references are rejected.
inline MipInstance parse_mps(std::istream& in, std::vector<std::string>* warnings = nullptr) {
    using detail::tokenize;
    using detail::upper;

    enum class Section { none, objsense, rows, columns, rhs, ranges, bounds, done };

    MipInstance mip;
    Section section = Section::none;
    bool in_integer_block = false;
    bool saw_rows = false;

    std::string objective_row_name;
    bool have_objective_row = false;
    std::set<std::string> dropped_free_rows;

    // duplicate detection; objective entries use row index -1
    std::set<std::pair<int, int>> seen_matrix_entries;
    std::set<int> seen_rhs_rows;
    std::map<int, double> range_values;  // row index -> RANGES value
    std::set<std::pair<std::string, int>> seen_bounds;

    auto warn = [&](const std::string& msg) {
        if (warnings) warnings->push_back(msg);
    };

    auto find_var = [&](const std::string& name, int lineno) {
        auto it = mip.var_index.find(name);
        if (it == mip.var_index.end())
            throw ParseError("line " + std::to_string(lineno) + ": unknown column '" + name + "'");
        return it->second;
    };

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '*') continue;

        const bool is_header = !std::isspace(static_cast<unsigned char>(line[0]));
        auto toks = tokenize(line);
        if (toks.empty()) continue;

        if (is_header) {
            std::string key = upper(toks[0]);
            if (key == "NAME") {
                if (toks.size() > 1) mip.name = toks[1];
                section = Section::none;
            } else if (key == "OBJSENSE") {
                section = Section::objsense;
                if (toks.size() > 1) {
                    std::string s = upper(toks[1]);
                    mip.objective_sense = (s == "MAX" || s == "MAXIMIZE") ? ObjSense::maximize
                                                                          : ObjSense::minimize;
                    section = Section::none;
                }
            } else if (key == "ROWS") {
                section = Section::rows;
                saw_rows = true;
            } else if (key == "COLUMNS") {
                section = Section::columns;
            } else if (key == "RHS") {
                section = Section::rhs;
            } else if (key == "RANGES") {
                section = Section::ranges;
            } else if (key == "BOUNDS") {
                section = Section::bounds;
            } else if (key == "ENDATA") {
                section = Section::done;
                break;
            } else if (key == "SOS") {
                throw ParseError("line " + std::to_string(lineno) +
                                 ": unsupported feature: SOS section");
            } else {
                throw ParseError("line " + std::to_string(lineno) + ": malformed section header '" +
                                 toks[0] + "'");
            }
            continue;
        }

        switch (section) {
            case Section::objsense: {
                std::string s = upper(toks[0]);
                mip.objective_sense =
                    (s == "MAX" || s == "MAXIMIZE") ? ObjSense::maximize : ObjSense::minimize;
                section = Section::none;
                break;
            }

            case Section::rows: {
                if (toks.size() != 2)
                    throw ParseError("line " + std::to_string(lineno) + ": malformed ROWS entry");
                std::string type = upper(toks[0]);
                const std::string& rname = toks[1];
                if (mip.row_index.count(rname) || rname == objective_row_name ||
                    dropped_free_rows.count(rname))
                    throw ParseError("line " + std::to_string(lineno) + ": duplicate row '" +
                                     rname + "'");
                if (type == "N") {
                    if (!have_objective_row) {
                        objective_row_name = rname;
                        have_objective_row = true;
                    } else {
                        dropped_free_rows.insert(rname);
                        warn("dropping free row '" + rname + "' (only the first N row is kept)");
                    }
                } else if (type == "L" || type == "G" || type == "E") {
                    mip.row_index.emplace(rname, mip.m);
                    mip.row_names.push_back(rname);
                    mip.rows.emplace_back();
                    mip.rhs.push_back(0.0);
                    mip.sense.push_back(type == "L"   ? RowSense::less_equal
                                        : type == "G" ? RowSense::greater_equal
                                                      : RowSense::equal);
                    ++mip.m;
                } else {
                    throw ParseError("line " + std::to_string(lineno) + ": unknown row type '" +
                                     toks[0] + "'");
                }
                break;
            }

            case Section::columns: {
                // INTORG/INTEND marker line
                bool is_marker = false;
                for (const auto& t : toks)
                    if (upper(t) == "'MARKER'") is_marker = true;
                if (is_marker) {
                    for (const auto& t : toks) {
                        std::string u = upper(t);
                        if (u == "'INTORG'") in_integer_block = true;
                        if (u == "'INTEND'") in_integer_block = false;
                    }
                    break;
                }
                if (toks.size() != 3 && toks.size() != 5)
                    throw ParseError("line " + std::to_string(lineno) +
                                     ": malformed COLUMNS entry");
                const std::string& cname = toks[0];
                int j;
                auto it = mip.var_index.find(cname);
                if (it == mip.var_index.end()) {
                    j = mip.n;
                    mip.var_index.emplace(cname, j);
                    mip.var_names.push_back(cname);
                    mip.lower.push_back(0.0);
                    mip.upper.push_back(kInfinity);
                    mip.is_integer.push_back(in_integer_block ? 1 : 0);
                    ++mip.n;
                } else {
                    j = it->second;
                }
                for (size_t k = 1; k + 1 < toks.size(); k += 2) {
                    const std::string& rname = toks[k];
                    double value = detail::parse_number(toks[k + 1], lineno);
                    int i;
                    if (have_objective_row && rname == objective_row_name) {
                        i = -1;
                    } else if (dropped_free_rows.count(rname)) {
                        continue;  // entry of a dropped free row
                    } else {
                        auto rit = mip.row_index.find(rname);
                        if (rit == mip.row_index.end())
                            throw ParseError("line " + std::to_string(lineno) +
                                             ": unknown row '" + rname + "'");
                        i = rit->second;
                    }
                    if (!seen_matrix_entries.emplace(i, j).second)
                        throw ParseError("line " + std::to_string(lineno) +
                                         ": duplicate coefficient for column '" + cname +
                                         "' in row '" + rname + "'");
                    if (value == 0.0) continue;  // keep sparse canonical form
                    if (i < 0)
                        mip.objective.emplace(j, value);
                    else
                        mip.rows[static_cast<size_t>(i)].emplace(j, value);
                }
                break;
            }

            case Section::rhs: {
                // optional set name when the token count is even
                size_t k = (toks.size() % 2 == 1) ? 1 : 0;
                if (toks.size() < k + 2 || (toks.size() - k) % 2 != 0)
                    throw ParseError("line " + std::to_string(lineno) + ": malformed RHS entry");
                for (; k + 1 < toks.size(); k += 2) {
                    const std::string& rname = toks[k];
                    double value = detail::parse_number(toks[k + 1], lineno);
                    if (have_objective_row && rname == objective_row_name) continue;  // obj offset
                    auto rit = mip.row_index.find(rname);
                    if (rit == mip.row_index.end())
                        throw ParseError("line " + std::to_string(lineno) + ": unknown row '" +
                                         rname + "' in RHS");
                    if (!seen_rhs_rows.insert(rit->second).second)
                        throw ParseError("line " + std::to_string(lineno) +
                                         ": duplicate RHS for row '" + rname + "'");
                    mip.rhs[static_cast<size_t>(rit->second)] = value;
                }
                break;
            }

            case Section::ranges: {
                size_t k = (toks.size() % 2 == 1) ? 1 : 0;
                if (toks.size() < k + 2 || (toks.size() - k) % 2 != 0)
                    throw ParseError("line " + std::to_string(lineno) + ": malformed RANGES entry");
                for (; k + 1 < toks.size(); k += 2) {
                    const std::string& rname = toks[k];
                    double value = detail::parse_number(toks[k + 1], lineno);
                    auto rit = mip.row_index.find(rname);
                    if (rit == mip.row_index.end())
                        throw ParseError("line " + std::to_string(lineno) + ": unknown row '" +
                                         rname + "' in RANGES");
                    if (!range_values.emplace(rit->second, value).second)
                        throw ParseError("line " + std::to_string(lineno) +
                                         ": duplicate RANGES for row '" + rname + "'");
                }
                break;
            }

            case Section::bounds: {
                if (toks.size() < 3)
                    throw ParseError("line " + std::to_string(lineno) + ": malformed BOUNDS entry");
                std::string type = upper(toks[0]);
                bool has_value = (type == "UP" || type == "LO" || type == "FX" || type == "UI" ||
                                  type == "LI");
                size_t expect = has_value ? 4u : 3u;
                if (toks.size() != expect)
                    throw ParseError("line " + std::to_string(lineno) + ": malformed " + type +
                                     " bound");
                int j = find_var(toks[2], lineno);
                double value = has_value ? detail::parse_number(toks[3], lineno) : 0.0;
                size_t ju = static_cast<size_t>(j);
                if (!seen_bounds.emplace(type, j).second)
                    throw ParseError("line " + std::to_string(lineno) + ": duplicate " + type +
                                     " bound for column '" + toks[2] + "'");
                if (type == "UP") {
                    mip.upper[ju] = value;
                } else if (type == "LO") {
                    mip.lower[ju] = value;
                } else if (type == "FX") {
                    mip.lower[ju] = mip.upper[ju] = value;
                } else if (type == "FR") {
                    mip.lower[ju] = -kInfinity;
                    mip.upper[ju] = kInfinity;
                } else if (type == "MI") {
                    mip.lower[ju] = -kInfinity;
                } else if (type == "PL") {
                    mip.upper[ju] = kInfinity;
                } else if (type == "BV") {
                    mip.lower[ju] = 0.0;
                    mip.upper[ju] = 1.0;
                    mip.is_integer[ju] = 1;
                } else if (type == "UI") {
                    mip.upper[ju] = value;
                    mip.is_integer[ju] = 1;
                } else if (type == "LI") {
                    mip.lower[ju] = value;
                    mip.is_integer[ju] = 1;
                } else {
                    throw ParseError("line " + std::to_string(lineno) + ": unknown bound type '" +
                                     toks[0] + "'");
                }
                break;
            }

            case Section::none:
            case Section::done:
                throw ParseError("line " + std::to_string(lineno) + ": data outside any section");
        }
    }

    if (!saw_rows) throw ParseError("missing ROWS section");

    // expand each ranged row into a pair of one-sided constraints
    for (const auto& [i, r] : range_values) {
        size_t iu = static_cast<size_t>(i);
        std::string extra_name = mip.row_names[iu] + "_RNG";
        while (mip.row_index.count(extra_name)) extra_name += "_";
        RowSense extra_sense;
        double extra_rhs;
        switch (mip.sense[iu]) {
            case RowSense::less_equal:
                extra_sense = RowSense::greater_equal;
                extra_rhs = mip.rhs[iu] - std::fabs(r);
                break;
            case RowSense::greater_equal:
                extra_sense = RowSense::less_equal;
                extra_rhs = mip.rhs[iu] + std::fabs(r);
                break;
            case RowSense::equal:
            default:
                if (r >= 0) {
                    mip.sense[iu] = RowSense::greater_equal;
                    extra_sense = RowSense::less_equal;
                    extra_rhs = mip.rhs[iu] + r;
                } else {
                    mip.sense[iu] = RowSense::less_equal;
                    extra_sense = RowSense::greater_equal;
                    extra_rhs = mip.rhs[iu] + r;
                }
                break;
        }
        mip.row_index.emplace(extra_name, mip.m);
        mip.row_names.push_back(extra_name);
        mip.rows.push_back(mip.rows[iu]);
        mip.rhs.push_back(extra_rhs);
        mip.sense.push_back(extra_sense);
        ++mip.m;
    }

    validate(mip);
    return mip;
}

inline MipInstance parse_mps_string(const std::string& text,
                                    std::vector<std::string>* warnings = nullptr) {
    std::istringstream in(text);
    return parse_mps(in, warnings);
}

/// Emits a canonical free-format MPS document; parsing it back yields an
/// identical model (values are printed with 17 significant digits).
inline void write_mps(const MipInstance& mip, std::ostream& out) {
    using detail::fmt17;

    std::string obj_name = "OBJ";
    while (mip.row_index.count(obj_name)) obj_name += "_";

    out << "NAME " << mip.name << "\n";
    out << "OBJSENSE\n    " << (mip.objective_sense == ObjSense::maximize ? "MAX" : "MIN") << "\n";
    out << "ROWS\n";
    out << " N  " << obj_name << "\n";
    for (int i = 0; i < mip.m; ++i)
        out << " " << row_sense_char(mip.sense[static_cast<size_t>(i)]) << "  "
            << mip.row_names[static_cast<size_t>(i)] << "\n";

    out << "COLUMNS\n";
    bool in_int = false;
    int marker_id = 0;
    // column entries grouped per variable: objective first, then rows ascending
    std::vector<std::vector<std::pair<int, double>>> cols(static_cast<size_t>(mip.n));
    for (int i = 0; i < mip.m; ++i)
        for (const auto& [j, v] : mip.rows[static_cast<size_t>(i)])
            cols[static_cast<size_t>(j)].emplace_back(i, v);
    for (int j = 0; j < mip.n; ++j) {
        size_t ju = static_cast<size_t>(j);
        if (static_cast<bool>(mip.is_integer[ju]) != in_int) {
            in_int = !in_int;
            out << "    M" << marker_id++ << "  'MARKER'  " << (in_int ? "'INTORG'" : "'INTEND'")
                << "\n";
        }
        const std::string& vn = mip.var_names[ju];
        auto oit = mip.objective.find(j);
        if (oit != mip.objective.end())
            out << "    " << vn << "  " << obj_name << "  " << fmt17(oit->second) << "\n";
        else if (cols[ju].empty())  // declare entry-less columns via an explicit zero
            out << "    " << vn << "  " << obj_name << "  0\n";
        for (const auto& [i, v] : cols[ju])
            out << "    " << vn << "  " << mip.row_names[static_cast<size_t>(i)] << "  " << fmt17(v)
                << "\n";
    }
    if (in_int) out << "    M" << marker_id++ << "  'MARKER'  'INTEND'\n";

    out << "RHS\n";
    for (int i = 0; i < mip.m; ++i)
        if (mip.rhs[static_cast<size_t>(i)] != 0.0)
            out << "    RHS  " << mip.row_names[static_cast<size_t>(i)] << "  "
                << fmt17(mip.rhs[static_cast<size_t>(i)]) << "\n";

    out << "BOUNDS\n";
    for (int j = 0; j < mip.n; ++j) {
        size_t ju = static_cast<size_t>(j);
        const std::string& vn = mip.var_names[ju];
        double lo = mip.lower[ju], up = mip.upper[ju];
        if (lo == up) {
            out << " FX  BND  " << vn << "  " << fmt17(lo) << "\n";
            continue;
        }
        if (lo == -kInfinity)
            out << " MI  BND  " << vn << "\n";
        else if (lo != 0.0)
            out << " LO  BND  " << vn << "  " << fmt17(lo) << "\n";
        if (up != kInfinity) out << " UP  BND  " << vn << "  " << fmt17(up) << "\n";
    }
    out << "ENDATA\n";
}

inline std::string write_mps_string(const MipInstance& mip) {
    std::ostringstream out;
    write_mps(mip, out);
    return out.str();
}

}  // namespace mipsym
