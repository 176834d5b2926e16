#pragma once

/// Reasonable-permutation classes.
///
/// Variables (constraints) are grouped by a signature; a permutation is
/// "reasonable" when it maps every variable/constraint onto one with an
/// identical signature. The signature components are configurable; every
/// component is a formulation-symmetry invariant, so refining the signature
/// never removes a true symmetry, it only shrinks the search space.

#include <algorithm>
#include <array>
#include <cstdio>
#include <functional>
#include <string>
#include <tuple>
#include <utility>

#include "mipsym/mip.hpp"

namespace mipsym {

struct SignatureConfig {
    bool use_bounds = true;        ///< variables must share lower/upper bounds
    bool use_sense = true;         ///< constraints must share their sense
    bool use_value_profile = true; ///< sorted multiset of column/row values must match
    bool sharpen_var_degree = false;  ///< variables must appear in equally many constraints
    bool sharpen_con_size = false;    ///< constraints must contain equally many variables
    int tolerance_digits = 0;  ///< 0 = exact coefficient equality, k>0 = round to k significant digits
};

/// Coefficient equality policy shared by signatures, the QUBO builders and
/// the symmetry verifier. With tolerance_digits == 0 two coefficients are
/// equal iff their values are equal; otherwise both are bucketed by rounding
/// to the given number of significant decimal digits before comparison.
class CoeffEq {
  public:
    explicit CoeffEq(int digits = 0) : digits_(digits) {
        if (digits_ < 0 || digits_ > 17) throw std::invalid_argument("tolerance digits out of range");
    }

    double key(double v) const {
        if (v == 0.0) return 0.0;  // normalizes -0.0
        if (digits_ == 0) return v;
        std::array<char, 48> buf{};
        std::snprintf(buf.data(), buf.size(), "%.*e", digits_ - 1, v);
        return std::strtod(buf.data(), nullptr);
    }

    bool eq(double a, double b) const { return key(a) == key(b); }

    int digits() const { return digits_; }

  private:
    int digits_;
};

namespace detail {

inline void append_value(std::string& s, double v) {
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    s += buf.data();
}

inline void append_profile(std::string& s, std::vector<double> values) {
    std::sort(values.begin(), values.end());
    s += ";p=";
    for (double v : values) {
        append_value(s, v);
        s += ',';
    }
}

}  // namespace detail

/// Signature of variable j: objective coefficient and integrality, plus the
/// configured refinements. Returned as an opaque hashable string.
inline std::string variable_signature(const MipInstance& mip, int j, const SignatureConfig& cfg) {
    if (j < 0 || j >= mip.n) throw std::out_of_range("variable index out of range");
    CoeffEq eq(cfg.tolerance_digits);
    std::string s = "c=";
    detail::append_value(s, eq.key(mip.objective_coefficient(j)));
    s += ";i=";
    s += mip.is_integer[static_cast<size_t>(j)] ? '1' : '0';
    if (cfg.use_bounds) {
        s += ";lb=";
        detail::append_value(s, eq.key(mip.lower[static_cast<size_t>(j)]));
        s += ";ub=";
        detail::append_value(s, eq.key(mip.upper[static_cast<size_t>(j)]));
    }
    int degree = 0;
    if (cfg.use_value_profile || cfg.sharpen_var_degree) {
        std::vector<double> column;
        for (const auto& row : mip.rows) {
            auto it = row.find(j);
            if (it != row.end()) column.push_back(eq.key(it->second));
        }
        degree = static_cast<int>(column.size());
        if (cfg.use_value_profile) detail::append_profile(s, std::move(column));
    }
    if (cfg.sharpen_var_degree) s += ";d=" + std::to_string(degree);
    return s;
}

/// Signature of constraint i: right-hand side plus the configured refinements.
inline std::string constraint_signature(const MipInstance& mip, int i, const SignatureConfig& cfg) {
    if (i < 0 || i >= mip.m) throw std::out_of_range("row index out of range");
    CoeffEq eq(cfg.tolerance_digits);
    const auto& row = mip.rows[static_cast<size_t>(i)];
    std::string s = "b=";
    detail::append_value(s, eq.key(mip.rhs[static_cast<size_t>(i)]));
    if (cfg.use_sense) {
        s += ";s=";
        s += row_sense_char(mip.sense[static_cast<size_t>(i)]);
    }
    if (cfg.use_value_profile) {
        std::vector<double> values;
        values.reserve(row.size());
        for (const auto& [j, v] : row) {
            (void)j;
            values.push_back(eq.key(v));
        }
        detail::append_profile(s, std::move(values));
    }
    if (cfg.sharpen_con_size) s += ";z=" + std::to_string(row.size());
    return s;
}

struct ReasonabilityPartition {
    std::vector<int> var_class_of;             ///< variable -> class id
    std::vector<std::vector<int>> var_classes; ///< class id -> sorted members
    std::vector<int> con_class_of;
    std::vector<std::vector<int>> con_classes;
    long long nu = 0;  ///< sum over variables of |r(j)| = sum of squared class sizes
    long long mu = 0;  ///< same over constraints
    SignatureConfig config;

    const std::vector<int>& var_class(int j) const {
        return var_classes[static_cast<size_t>(var_class_of[static_cast<size_t>(j)])];
    }
    const std::vector<int>& con_class(int i) const {
        return con_classes[static_cast<size_t>(con_class_of[static_cast<size_t>(i)])];
    }
    bool same_var_class(int a, int b) const {
        return var_class_of[static_cast<size_t>(a)] == var_class_of[static_cast<size_t>(b)];
    }
    bool same_con_class(int a, int b) const {
        return con_class_of[static_cast<size_t>(a)] == con_class_of[static_cast<size_t>(b)];
    }
};

namespace detail {

inline std::pair<std::vector<int>, std::vector<std::vector<int>>> group_by_signature(
    int count, const std::function<std::string(int)>& signature) {
    std::vector<int> class_of(static_cast<size_t>(count), -1);
    std::vector<std::vector<int>> classes;
    std::unordered_map<std::string, int> id_of;  // class ids in first-appearance order
    for (int a = 0; a < count; ++a) {
        std::string sig = signature(a);
        auto [it, inserted] = id_of.emplace(std::move(sig), static_cast<int>(classes.size()));
        if (inserted) classes.emplace_back();
        class_of[static_cast<size_t>(a)] = it->second;
        classes[static_cast<size_t>(it->second)].push_back(a);
    }
    return {std::move(class_of), std::move(classes)};
}

}  // namespace detail

inline ReasonabilityPartition build_partition(const MipInstance& mip, const SignatureConfig& cfg) {
    ReasonabilityPartition part;
    part.config = cfg;

    // per-variable columns computed once; the per-index signature functions
    // above stay available for spot checks
    CoeffEq eq(cfg.tolerance_digits);
    std::vector<std::vector<double>> columns(static_cast<size_t>(mip.n));
    if (cfg.use_value_profile || cfg.sharpen_var_degree)
        for (const auto& row : mip.rows)
            for (const auto& [j, v] : row) columns[static_cast<size_t>(j)].push_back(eq.key(v));

    auto var_sig = [&](int j) {
        std::string s = "c=";
        detail::append_value(s, eq.key(mip.objective_coefficient(j)));
        s += ";i=";
        s += mip.is_integer[static_cast<size_t>(j)] ? '1' : '0';
        if (cfg.use_bounds) {
            s += ";lb=";
            detail::append_value(s, eq.key(mip.lower[static_cast<size_t>(j)]));
            s += ";ub=";
            detail::append_value(s, eq.key(mip.upper[static_cast<size_t>(j)]));
        }
        if (cfg.use_value_profile) detail::append_profile(s, columns[static_cast<size_t>(j)]);
        if (cfg.sharpen_var_degree)
            s += ";d=" + std::to_string(columns[static_cast<size_t>(j)].size());
        return s;
    };

    std::tie(part.var_class_of, part.var_classes) =
        detail::group_by_signature(mip.n, var_sig);
    std::tie(part.con_class_of, part.con_classes) = detail::group_by_signature(
        mip.m, [&](int i) { return constraint_signature(mip, i, cfg); });

    for (const auto& c : part.var_classes)
        part.nu += static_cast<long long>(c.size()) * static_cast<long long>(c.size());
    for (const auto& c : part.con_classes)
        part.mu += static_cast<long long>(c.size()) * static_cast<long long>(c.size());
    return part;
}

/// The largest variable class (the best decomposition target). Ties are
/// broken toward the class containing the smallest variable index, which is
/// the lowest class id since ids are assigned in first-appearance order.
inline std::pair<int, int> max_decomp_class(const ReasonabilityPartition& part) {
    if (part.var_classes.empty()) throw std::invalid_argument("empty partition");
    int best = 0;
    for (int k = 1; k < static_cast<int>(part.var_classes.size()); ++k)
        if (part.var_classes[static_cast<size_t>(k)].size() >
            part.var_classes[static_cast<size_t>(best)].size())
            best = k;
    return {best, static_cast<int>(part.var_classes[static_cast<size_t>(best)].size())};
}

}  // namespace mipsym
