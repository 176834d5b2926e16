#pragma once

/// Binary quadratic models over permutation-entry variables.
///
/// A model owns a registry of tagged variables — pi(j, j') "variable j maps
/// to j'" and sigma(i, i') "constraint i maps to i'" — plus an offset,
/// linear and quadratic coefficient maps. Squared penalties are expanded at
/// build time using x^2 = x, so a model's energy at an assignment equals the
/// value of the originating penalty expressions and the all-penalties-zero
/// level set sits exactly at energy 0.

#include <algorithm>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "mipsym/mip.hpp"

namespace mipsym {

enum class VarKind : uint8_t { pi, sigma };

/// One permutation-entry variable: pi (a -> b) over variables or
/// sigma (a -> b) over constraints.
struct VarRef {
    VarKind kind;
    int a;
    int b;

    friend bool operator==(const VarRef& x, const VarRef& y) {
        return x.kind == y.kind && x.a == y.a && x.b == y.b;
    }
    friend bool operator<(const VarRef& x, const VarRef& y) {
        if (x.kind != y.kind) return x.kind < y.kind;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    }
};

inline VarRef pi_var(int j, int jp) { return {VarKind::pi, j, jp}; }
inline VarRef sigma_var(int i, int ip) { return {VarKind::sigma, i, ip}; }

namespace detail {
inline uint64_t pack(const VarRef& r) {
    return (static_cast<uint64_t>(r.kind) << 62) | (static_cast<uint64_t>(r.a) << 31) |
           static_cast<uint64_t>(r.b);
}
}  // namespace detail

/// Ordered variable registry: live entries get dense indices 0..size()-1 in
/// insertion order (all pi entries first, lexicographic, then all sigma
/// entries); entries fixed to the constant 1 are tracked separately and have
/// no dense index.
class VarRegistry {
  public:
    VarRegistry(int n, int m) : n_(n), m_(m) {}

    void add(const VarRef& r) {
        uint64_t key = detail::pack(r);
        if (index_.count(key) || fixed_.count(key))
            throw std::logic_error("duplicate registry entry");
        index_.emplace(key, static_cast<int>(entries_.size()));
        entries_.push_back(r);
    }

    void fix_one(const VarRef& r) {
        uint64_t key = detail::pack(r);
        if (index_.count(key) || fixed_.count(key))
            throw std::logic_error("duplicate registry entry");
        fixed_.insert(key);
        fixed_ones_.push_back(r);
    }

    int size() const { return static_cast<int>(entries_.size()); }
    int total_entries() const { return size() + static_cast<int>(fixed_ones_.size()); }

    /// Dense index of a live entry, or -1 when absent (fixed or unregistered).
    int index_of(const VarRef& r) const {
        auto it = index_.find(detail::pack(r));
        return it == index_.end() ? -1 : it->second;
    }

    bool is_fixed_one(const VarRef& r) const { return fixed_.count(detail::pack(r)) != 0; }

    const std::vector<VarRef>& entries() const { return entries_; }
    const std::vector<VarRef>& fixed_ones() const { return fixed_ones_; }

    int pi_count() const {
        int c = 0;
        for (const auto& e : entries_) c += (e.kind == VarKind::pi);
        return c;
    }
    int sigma_count() const { return size() - pi_count(); }

    int n() const { return n_; }
    int m() const { return m_; }

  private:
    int n_;
    int m_;
    std::vector<VarRef> entries_;
    std::vector<VarRef> fixed_ones_;
    std::unordered_map<uint64_t, int> index_;
    std::unordered_set<uint64_t> fixed_;
};

struct PenaltyWeights {
    double permutation_pi = 1.0;    ///< row/column-sum penalties on pi
    double permutation_sigma = 1.0; ///< row/column-sum penalties on sigma
    double reasonable_pi = 1.0;     ///< unreasonable pi entries
    double reasonable_sigma = 1.0;  ///< unreasonable sigma entries
    double coefficient_match = 1.0; ///< mismatched matrix-entry mappings
    double diagonal_fix = 1.0;      ///< decomposition diagonal fixing

    void validate() const {
        if (permutation_pi <= 0 || permutation_sigma <= 0 || reasonable_pi <= 0 ||
            reasonable_sigma <= 0 || coefficient_match <= 0 || diagonal_fix <= 0)
            throw std::invalid_argument("penalty weights must be strictly positive");
    }
};

class QuboModel {
  public:
    explicit QuboModel(VarRegistry registry, PenaltyWeights weights = {})
        : registry_(std::move(registry)), weights_(weights) {
        weights_.validate();
    }

    void add_offset(double v) { offset_ += v; }

    void add_linear(int i, double v) {
        double& c = linear_[i];
        c += v;
        if (c == 0.0) linear_.erase(i);
    }

    /// Accumulates a quadratic term; folds i == j into linear via x^2 = x.
    void add_quadratic(int i, int j, double v) {
        if (i == j) {
            add_linear(i, v);
            return;
        }
        if (i > j) std::swap(i, j);
        auto key = std::make_pair(i, j);
        double& c = quadratic_[key];
        c += v;
        if (c == 0.0) quadratic_.erase(key);
    }

    double energy(const std::vector<uint8_t>& x) const {
        if (static_cast<int>(x.size()) != registry_.size())
            throw std::invalid_argument("assignment length does not match registry size");
        double e = offset_;
        for (const auto& [i, v] : linear_)
            if (x[static_cast<size_t>(i)]) e += v;
        for (const auto& [key, v] : quadratic_)
            if (x[static_cast<size_t>(key.first)] && x[static_cast<size_t>(key.second)]) e += v;
        return e;
    }

    const VarRegistry& registry() const { return registry_; }
    const PenaltyWeights& weights() const { return weights_; }
    double offset() const { return offset_; }
    const std::map<int, double>& linear() const { return linear_; }
    const std::map<std::pair<int, int>, double>& quadratic() const { return quadratic_; }

    bool same_coefficients(const QuboModel& o) const {
        return offset_ == o.offset_ && linear_ == o.linear_ && quadratic_ == o.quadratic_;
    }

    double max_abs_coefficient() const {
        double v = 0;
        for (const auto& [i, c] : linear_) {
            (void)i;
            v = std::max(v, std::fabs(c));
        }
        for (const auto& [k, c] : quadratic_) {
            (void)k;
            v = std::max(v, std::fabs(c));
        }
        return v;
    }

    double min_abs_coefficient() const {
        double v = kInfinity;
        for (const auto& [i, c] : linear_) {
            (void)i;
            v = std::min(v, std::fabs(c));
        }
        for (const auto& [k, c] : quadratic_) {
            (void)k;
            v = std::min(v, std::fabs(c));
        }
        return v == kInfinity ? 0.0 : v;
    }

  private:
    VarRegistry registry_;
    double offset_ = 0.0;
    std::map<int, double> linear_;
    std::map<std::pair<int, int>, double> quadratic_;
    PenaltyWeights weights_;
};

/// One linear equality over registry indices: sum of coeffs * x = rhs.
struct LinearConstraint {
    std::vector<std::pair<int, double>> coeffs;  // (dense index, coefficient), index-sorted
    double rhs = 1.0;
};

/// Quadratic objective plus explicit linear equality constraints.
struct QuboPlusModel {
    QuboModel objective;
    std::vector<LinearConstraint> constraints;
};

/// Standard equality-penalty reduction: objective + penalty * sum over
/// constraints of (sum coeffs*x - rhs)^2, squares expanded with x^2 = x.
inline QuboModel quboplus_to_qubo(const QuboPlusModel& model, double penalty) {
    if (!(penalty > 0.0)) throw std::invalid_argument("penalty must be positive");
    QuboModel out = model.objective;
    for (const auto& con : model.constraints) {
        out.add_offset(penalty * con.rhs * con.rhs);
        for (size_t a = 0; a < con.coeffs.size(); ++a) {
            const auto& [ia, ca] = con.coeffs[a];
            out.add_linear(ia, penalty * (ca * ca - 2.0 * con.rhs * ca));
            for (size_t b = a + 1; b < con.coeffs.size(); ++b) {
                const auto& [ib, cb] = con.coeffs[b];
                out.add_quadratic(ia, ib, penalty * 2.0 * ca * cb);
            }
        }
    }
    return out;
}

}  // namespace mipsym
