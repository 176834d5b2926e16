#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace mipsym {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

namespace detail {

/// Shortest decimal form with up to 17 significant digits; round-trips
/// exactly through strtod.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

}  // namespace detail

enum class ObjSense { minimize, maximize };
enum class RowSense { less_equal, equal, greater_equal };

inline char row_sense_char(RowSense s) {
    switch (s) {
        case RowSense::less_equal: return 'L';
        case RowSense::equal: return 'E';
        case RowSense::greater_equal: return 'G';
    }
    return '?';
}

/// Sparse vector in canonical form: only nonzero coefficients are stored,
/// keyed by 0-based index, ordered for deterministic iteration.
using SparseVec = std::map<int, double>;

/// A mixed-integer program in the canonical shape used throughout:
/// objective c over n variables, m constraint rows (A, b, sense),
/// per-variable bounds and integrality. Instances are immutable after
/// construction and safe to share across threads.
struct MipInstance {
    std::string name;
    int n = 0;  ///< number of variables
    int m = 0;  ///< number of constraints

    ObjSense objective_sense = ObjSense::minimize;
    SparseVec objective;  ///< c, nonzero entries only

    std::vector<SparseVec> rows;  ///< A, one sparse row per constraint
    std::vector<double> rhs;      ///< b
    std::vector<RowSense> sense;

    std::vector<double> lower;        ///< per-variable lower bound (may be -inf)
    std::vector<double> upper;        ///< per-variable upper bound (may be +inf)
    std::vector<uint8_t> is_integer;  ///< integrality flags

    std::vector<std::string> var_names;
    std::vector<std::string> row_names;
    std::unordered_map<std::string, int> var_index;
    std::unordered_map<std::string, int> row_index;

    /// A_ij including the implicit zero for absent sparse entries.
    double coefficient(int i, int j) const {
        if (i < 0 || i >= m) throw std::out_of_range("row index out of range");
        if (j < 0 || j >= n) throw std::out_of_range("variable index out of range");
        auto it = rows[i].find(j);
        return it == rows[i].end() ? 0.0 : it->second;
    }

    /// c_j including the implicit zero.
    double objective_coefficient(int j) const {
        if (j < 0 || j >= n) throw std::out_of_range("variable index out of range");
        auto it = objective.find(j);
        return it == objective.end() ? 0.0 : it->second;
    }

    bool same_model(const MipInstance& o) const {
        return name == o.name && n == o.n && m == o.m &&
               objective_sense == o.objective_sense && objective == o.objective &&
               rows == o.rows && rhs == o.rhs && sense == o.sense && lower == o.lower &&
               upper == o.upper && is_integer == o.is_integer && var_names == o.var_names &&
               row_names == o.row_names;
    }
};

/// Number of constraints each variable appears in (sparse column sizes).
inline std::vector<int> variable_degrees(const MipInstance& mip) {
    std::vector<int> deg(static_cast<size_t>(mip.n), 0);
    for (const auto& row : mip.rows)
        for (const auto& [j, v] : row) {
            (void)v;
            ++deg[static_cast<size_t>(j)];
        }
    return deg;
}

/// Checks the canonical-form invariants; throws std::logic_error on violation.
inline void validate(const MipInstance& mip) {
    if (mip.n < 0 || mip.m < 0) throw std::logic_error("negative dimension");
    if (mip.rows.size() != static_cast<size_t>(mip.m) ||
        mip.rhs.size() != static_cast<size_t>(mip.m) ||
        mip.sense.size() != static_cast<size_t>(mip.m) ||
        mip.row_names.size() != static_cast<size_t>(mip.m))
        throw std::logic_error("row array size mismatch");
    if (mip.lower.size() != static_cast<size_t>(mip.n) ||
        mip.upper.size() != static_cast<size_t>(mip.n) ||
        mip.is_integer.size() != static_cast<size_t>(mip.n) ||
        mip.var_names.size() != static_cast<size_t>(mip.n))
        throw std::logic_error("variable array size mismatch");
    for (const auto& [j, v] : mip.objective)
        if (j < 0 || j >= mip.n || v == 0.0) throw std::logic_error("bad objective entry");
    for (const auto& row : mip.rows)
        for (const auto& [j, v] : row)
            if (j < 0 || j >= mip.n || v == 0.0) throw std::logic_error("bad matrix entry");
    if (mip.var_index.size() != static_cast<size_t>(mip.n) ||
        mip.row_index.size() != static_cast<size_t>(mip.m))
        throw std::logic_error("name map is not a bijection");
    for (int j = 0; j < mip.n; ++j) {
        auto it = mip.var_index.find(mip.var_names[static_cast<size_t>(j)]);
        if (it == mip.var_index.end() || it->second != j)
            throw std::logic_error("variable name map is not a bijection");
    }
    for (int i = 0; i < mip.m; ++i) {
        auto it = mip.row_index.find(mip.row_names[static_cast<size_t>(i)]);
        if (it == mip.row_index.end() || it->second != i)
            throw std::logic_error("row name map is not a bijection");
    }
}

}  // namespace mipsym
