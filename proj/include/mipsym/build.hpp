#pragma once

/// Symmetry-detecting QUBO and QUBO-Plus builders.
///
/// Every formulation shares the same ingredients over a variable registry of
/// pi/sigma permutation entries:
///
///   * permutation penalties: (sum of a row's entries - 1)^2 and
///     (sum of a column's entries - 1)^2, forcing doubly stochastic 0/1
///     matrices, expanded to offset +w, linear -w per member and +2w per
///     unordered member pair;
///   * reasonableness penalties: +w on each registered entry that maps
///     across reasonability classes (full formulation only — the reduced
///     registries contain no such entries);
///   * coefficient-match penalties: +w on each product sigma(i,i')*pi(j,j')
///     whose activation would move matrix entry A(i,j) onto a position with
///     a different value A(i',j'), implicit zeros included;
///   * diagonal fixing (decomposed form): (1 - pi(j',j'))^2 for every
///     variable outside the decomposition class, or substitution of those
///     diagonals by the constant 1.
///
/// Registry sizes: full n^2+m^2, reduced nu+mu, decomposed over class C
/// |C|^2 + (n-|C|) + mu.

#include <string>

#include "mipsym/qubo.hpp"
#include "mipsym/reasonability.hpp"

namespace mipsym {

enum class FixMode { constants, penalty };

namespace detail {

inline void require_nondegenerate(const MipInstance& mip) {
    if (mip.n < 1 || mip.m < 1)
        throw std::invalid_argument("degenerate instance: need at least one variable and one constraint");
}

inline VarRegistry full_registry(const MipInstance& mip) {
    VarRegistry reg(mip.n, mip.m);
    for (int j = 0; j < mip.n; ++j)
        for (int jp = 0; jp < mip.n; ++jp) reg.add(pi_var(j, jp));
    for (int i = 0; i < mip.m; ++i)
        for (int ip = 0; ip < mip.m; ++ip) reg.add(sigma_var(i, ip));
    return reg;
}

inline VarRegistry reduced_registry(const MipInstance& mip, const ReasonabilityPartition& part) {
    VarRegistry reg(mip.n, mip.m);
    for (int j = 0; j < mip.n; ++j)
        for (int jp : part.var_class(j)) reg.add(pi_var(j, jp));
    for (int i = 0; i < mip.m; ++i)
        for (int ip : part.con_class(i)) reg.add(sigma_var(i, ip));
    return reg;
}

inline VarRegistry decomposed_registry(const MipInstance& mip, const ReasonabilityPartition& part,
                                       int class_id, FixMode fix_mode) {
    if (class_id < 0 || class_id >= static_cast<int>(part.var_classes.size()))
        throw std::invalid_argument("invalid decomposition class id " + std::to_string(class_id));
    VarRegistry reg(mip.n, mip.m);
    for (int j = 0; j < mip.n; ++j) {
        if (part.var_class_of[static_cast<size_t>(j)] == class_id) {
            for (int jp : part.var_classes[static_cast<size_t>(class_id)]) reg.add(pi_var(j, jp));
        } else if (fix_mode == FixMode::constants) {
            reg.fix_one(pi_var(j, j));
        } else {
            reg.add(pi_var(j, j));
        }
    }
    for (int i = 0; i < mip.m; ++i)
        for (int ip : part.con_class(i)) reg.add(sigma_var(i, ip));
    return reg;
}

/// (sum of members - 1)^2, members given as live dense indices.
inline void add_sum_to_one_penalty(QuboModel& model, const std::vector<int>& members, double w) {
    model.add_offset(w);
    for (size_t a = 0; a < members.size(); ++a) {
        model.add_linear(members[a], -w);
        for (size_t b = a + 1; b < members.size(); ++b)
            model.add_quadratic(members[a], members[b], 2.0 * w);
    }
}

/// Groups of live pi (sigma) indices per row j and per column j', in the
/// index sets the formulation sums over.
struct SumGroups {
    std::vector<std::vector<int>> pi_rows, pi_cols, sigma_rows, sigma_cols;
};

inline SumGroups permutation_sum_groups(const VarRegistry& reg) {
    SumGroups g;
    g.pi_rows.resize(static_cast<size_t>(reg.n()));
    g.pi_cols.resize(static_cast<size_t>(reg.n()));
    g.sigma_rows.resize(static_cast<size_t>(reg.m()));
    g.sigma_cols.resize(static_cast<size_t>(reg.m()));
    for (int idx = 0; idx < reg.size(); ++idx) {
        const VarRef& e = reg.entries()[static_cast<size_t>(idx)];
        if (e.kind == VarKind::pi) {
            g.pi_rows[static_cast<size_t>(e.a)].push_back(idx);
            g.pi_cols[static_cast<size_t>(e.b)].push_back(idx);
        } else {
            g.sigma_rows[static_cast<size_t>(e.a)].push_back(idx);
            g.sigma_cols[static_cast<size_t>(e.b)].push_back(idx);
        }
    }
    return g;
}

/// Coefficient-match penalties over all registered (sigma, pi) entry pairs,
/// iterating the sparse rows of A; pi entries fixed to 1 fold into linear
/// terms on the sigma entry.
inline void add_coefficient_match_penalties(QuboModel& model, const MipInstance& mip,
                                            const CoeffEq& eq, double w) {
    const VarRegistry& reg = model.registry();
    struct PiEntry {
        int j, jp, index;  // index -1 for fixed-to-one entries
    };
    std::vector<PiEntry> pis;
    for (int idx = 0; idx < reg.size(); ++idx) {
        const VarRef& e = reg.entries()[static_cast<size_t>(idx)];
        if (e.kind == VarKind::pi) pis.push_back({e.a, e.b, idx});
    }
    for (const VarRef& e : reg.fixed_ones())
        if (e.kind == VarKind::pi) pis.push_back({e.a, e.b, -1});

    auto value = [&](const SparseVec& row, int j) {
        auto it = row.find(j);
        return it == row.end() ? 0.0 : it->second;
    };

    for (int idx = 0; idx < reg.size(); ++idx) {
        const VarRef& s = reg.entries()[static_cast<size_t>(idx)];
        if (s.kind != VarKind::sigma) continue;
        const SparseVec& row_i = mip.rows[static_cast<size_t>(s.a)];
        const SparseVec& row_ip = mip.rows[static_cast<size_t>(s.b)];
        for (const PiEntry& p : pis) {
            if (eq.eq(value(row_i, p.j), value(row_ip, p.jp))) continue;
            if (p.index >= 0)
                model.add_quadratic(idx, p.index, w);
            else
                model.add_linear(idx, w);  // pi entry is the constant 1
        }
    }
}

inline void add_sigma_permutation_penalties(QuboModel& model, const SumGroups& groups, double w) {
    for (const auto& g : groups.sigma_rows) add_sum_to_one_penalty(model, g, w);
    for (const auto& g : groups.sigma_cols) add_sum_to_one_penalty(model, g, w);
}

}  // namespace detail

/// Full formulation over all n^2 pi and m^2 sigma entries.
inline QuboModel build_full(const MipInstance& mip, const ReasonabilityPartition& part,
                            const PenaltyWeights& weights = {}) {
    detail::require_nondegenerate(mip);
    QuboModel model(detail::full_registry(mip), weights);
    auto groups = detail::permutation_sum_groups(model.registry());
    for (const auto& g : groups.pi_rows)
        detail::add_sum_to_one_penalty(model, g, weights.permutation_pi);
    for (const auto& g : groups.pi_cols)
        detail::add_sum_to_one_penalty(model, g, weights.permutation_pi);
    detail::add_sigma_permutation_penalties(model, groups, weights.permutation_sigma);
    for (int idx = 0; idx < model.registry().size(); ++idx) {
        const VarRef& e = model.registry().entries()[static_cast<size_t>(idx)];
        if (e.kind == VarKind::pi && !part.same_var_class(e.a, e.b))
            model.add_linear(idx, weights.reasonable_pi);
        if (e.kind == VarKind::sigma && !part.same_con_class(e.a, e.b))
            model.add_linear(idx, weights.reasonable_sigma);
    }
    detail::add_coefficient_match_penalties(model, mip, CoeffEq(part.config.tolerance_digits),
                                            weights.coefficient_match);
    return model;
}

/// Reduced formulation restricted to reasonable entries; the reasonableness
/// penalties vanish because unreasonable entries are simply not registered.
inline QuboModel build_reduced(const MipInstance& mip, const ReasonabilityPartition& part,
                               const PenaltyWeights& weights = {}) {
    detail::require_nondegenerate(mip);
    QuboModel model(detail::reduced_registry(mip, part), weights);
    auto groups = detail::permutation_sum_groups(model.registry());
    for (const auto& g : groups.pi_rows)
        detail::add_sum_to_one_penalty(model, g, weights.permutation_pi);
    for (const auto& g : groups.pi_cols)
        detail::add_sum_to_one_penalty(model, g, weights.permutation_pi);
    detail::add_sigma_permutation_penalties(model, groups, weights.permutation_sigma);
    detail::add_coefficient_match_penalties(model, mip, CoeffEq(part.config.tolerance_digits),
                                            weights.coefficient_match);
    return model;
}

/// Decomposition over one variable class: permutations are searched within
/// the class while every outside variable is pinned to itself, either by a
/// fixing penalty or by substituting its diagonal entry with the constant 1.
inline QuboModel build_decomposed(const MipInstance& mip, const ReasonabilityPartition& part,
                                  int class_id, const PenaltyWeights& weights = {},
                                  FixMode fix_mode = FixMode::constants) {
    detail::require_nondegenerate(mip);
    QuboModel model(detail::decomposed_registry(mip, part, class_id, fix_mode), weights);
    const VarRegistry& reg = model.registry();
    const auto& members = part.var_classes[static_cast<size_t>(class_id)];

    // permutation penalties over the class block only
    for (int j : members) {
        std::vector<int> row, col;
        for (int jp : members) {
            row.push_back(reg.index_of(pi_var(j, jp)));
            col.push_back(reg.index_of(pi_var(jp, j)));
        }
        detail::add_sum_to_one_penalty(model, row, weights.permutation_pi);
        detail::add_sum_to_one_penalty(model, col, weights.permutation_pi);
    }
    auto groups = detail::permutation_sum_groups(reg);
    detail::add_sigma_permutation_penalties(model, groups, weights.permutation_sigma);

    detail::add_coefficient_match_penalties(model, mip, CoeffEq(part.config.tolerance_digits),
                                            weights.coefficient_match);

    if (fix_mode == FixMode::penalty) {
        // (1 - x)^2 = 1 - x for binary x
        for (int j = 0; j < mip.n; ++j) {
            if (part.var_class_of[static_cast<size_t>(j)] == class_id) continue;
            model.add_offset(weights.diagonal_fix);
            model.add_linear(reg.index_of(pi_var(j, j)), -weights.diagonal_fix);
        }
    }
    return model;
}

namespace detail {

inline LinearConstraint unit_sum_constraint(const std::vector<int>& members) {
    LinearConstraint con;
    for (int idx : members) con.coeffs.emplace_back(idx, 1.0);
    std::sort(con.coeffs.begin(), con.coeffs.end());
    con.rhs = 1.0;
    return con;
}

}  // namespace detail

/// Full QUBO-Plus: coefficient-match plus reasonableness objective, with the
/// doubly stochastic requirements expressed as 2n+2m equality constraints.
inline QuboPlusModel build_quboplus_full(const MipInstance& mip,
                                         const ReasonabilityPartition& part,
                                         const PenaltyWeights& weights = {}) {
    detail::require_nondegenerate(mip);
    QuboModel objective(detail::full_registry(mip), weights);
    for (int idx = 0; idx < objective.registry().size(); ++idx) {
        const VarRef& e = objective.registry().entries()[static_cast<size_t>(idx)];
        if (e.kind == VarKind::pi && !part.same_var_class(e.a, e.b))
            objective.add_linear(idx, weights.reasonable_pi);
        if (e.kind == VarKind::sigma && !part.same_con_class(e.a, e.b))
            objective.add_linear(idx, weights.reasonable_sigma);
    }
    detail::add_coefficient_match_penalties(objective, mip, CoeffEq(part.config.tolerance_digits),
                                            weights.coefficient_match);
    QuboPlusModel model{std::move(objective), {}};
    auto groups = detail::permutation_sum_groups(model.objective.registry());
    for (const auto& g : groups.pi_rows)
        model.constraints.push_back(detail::unit_sum_constraint(g));
    for (const auto& g : groups.pi_cols)
        model.constraints.push_back(detail::unit_sum_constraint(g));
    for (const auto& g : groups.sigma_rows)
        model.constraints.push_back(detail::unit_sum_constraint(g));
    for (const auto& g : groups.sigma_cols)
        model.constraints.push_back(detail::unit_sum_constraint(g));
    return model;
}

/// Reduced QUBO-Plus: coefficient-match objective over reasonable entries,
/// class-restricted row/column sums as constraints (2n+2m of them).
inline QuboPlusModel build_quboplus_reduced(const MipInstance& mip,
                                            const ReasonabilityPartition& part,
                                            const PenaltyWeights& weights = {}) {
    detail::require_nondegenerate(mip);
    QuboModel objective(detail::reduced_registry(mip, part), weights);
    detail::add_coefficient_match_penalties(objective, mip, CoeffEq(part.config.tolerance_digits),
                                            weights.coefficient_match);
    QuboPlusModel model{std::move(objective), {}};
    auto groups = detail::permutation_sum_groups(model.objective.registry());
    for (const auto& g : groups.pi_rows)
        model.constraints.push_back(detail::unit_sum_constraint(g));
    for (const auto& g : groups.pi_cols)
        model.constraints.push_back(detail::unit_sum_constraint(g));
    for (const auto& g : groups.sigma_rows)
        model.constraints.push_back(detail::unit_sum_constraint(g));
    for (const auto& g : groups.sigma_cols)
        model.constraints.push_back(detail::unit_sum_constraint(g));
    return model;
}

/// Decomposed QUBO-Plus over one class: 2|C| class sums, 2m sigma sums and
/// n-|C| fixing equalities pi(j',j') = 1.
inline QuboPlusModel build_quboplus_decomposed(const MipInstance& mip,
                                               const ReasonabilityPartition& part, int class_id,
                                               const PenaltyWeights& weights = {}) {
    detail::require_nondegenerate(mip);
    QuboModel objective(detail::decomposed_registry(mip, part, class_id, FixMode::penalty),
                        weights);
    detail::add_coefficient_match_penalties(objective, mip, CoeffEq(part.config.tolerance_digits),
                                            weights.coefficient_match);
    QuboPlusModel model{std::move(objective), {}};
    const VarRegistry& reg = model.objective.registry();
    const auto& members = part.var_classes[static_cast<size_t>(class_id)];
    for (int j : members) {
        std::vector<int> row;
        for (int jp : members) row.push_back(reg.index_of(pi_var(j, jp)));
        model.constraints.push_back(detail::unit_sum_constraint(row));
    }
    for (int j : members) {
        std::vector<int> col;
        for (int jp : members) col.push_back(reg.index_of(pi_var(jp, j)));
        model.constraints.push_back(detail::unit_sum_constraint(col));
    }
    auto groups = detail::permutation_sum_groups(reg);
    for (const auto& g : groups.sigma_rows)
        model.constraints.push_back(detail::unit_sum_constraint(g));
    for (const auto& g : groups.sigma_cols)
        model.constraints.push_back(detail::unit_sum_constraint(g));
    for (int j = 0; j < mip.n; ++j) {
        if (part.var_class_of[static_cast<size_t>(j)] == class_id) continue;
        LinearConstraint fix;
        fix.coeffs.emplace_back(reg.index_of(pi_var(j, j)), 1.0);
        fix.rhs = 1.0;
        model.constraints.push_back(std::move(fix));
    }
    return model;
}

}  // namespace mipsym
