#pragma once

/// Decoding assignments into permutations and verifying formulation
/// symmetries independently of any QUBO machinery.
///
/// A formulation symmetry is a variable permutation pi for which some
/// constraint permutation sigma exists with: the integer-variable set
/// preserved, objective coefficients preserved (c_pi(j) = c_j), right-hand
/// sides preserved (b_sigma(i) = b_i), and A_(sigma(i), pi(j)) = A_(i,j) for
/// every entry. Sense and bound preservation are tied to the corresponding
/// signature flags so that the verifier and the formulations agree on what
/// counts as a symmetry.

#include <numeric>
#include <set>
#include <string>

#include "mipsym/qubo.hpp"
#include "mipsym/reasonability.hpp"

namespace mipsym {

enum class SymmetryFailure {
    none,
    not_bijective,
    integer_set,
    objective,
    rhs,
    sense,
    bounds,
    matrix
};

inline const char* to_string(SymmetryFailure f) {
    switch (f) {
        case SymmetryFailure::none: return "none";
        case SymmetryFailure::not_bijective: return "not_bijective";
        case SymmetryFailure::integer_set: return "integer_set";
        case SymmetryFailure::objective: return "objective";
        case SymmetryFailure::rhs: return "rhs";
        case SymmetryFailure::sense: return "sense";
        case SymmetryFailure::bounds: return "bounds";
        case SymmetryFailure::matrix: return "matrix";
    }
    return "?";
}

struct DecodedSymmetry {
    std::vector<int> pi;     ///< variable j maps to pi[j]
    std::vector<int> sigma;  ///< constraint i maps to sigma[i]
    bool valid_permutation = false;
    bool is_symmetry = false;
    SymmetryFailure failure = SymmetryFailure::none;
};

inline bool is_bijection(const std::vector<int>& p) {
    std::vector<uint8_t> hit(p.size(), 0);
    for (int v : p) {
        if (v < 0 || v >= static_cast<int>(p.size()) || hit[static_cast<size_t>(v)]) return false;
        hit[static_cast<size_t>(v)] = 1;
    }
    return true;
}

/// Checks the formulation-symmetry conditions, returning the first failing
/// one (or none). pi and sigma must be index vectors of sizes n and m.
inline SymmetryFailure check_formulation_symmetry(const MipInstance& mip,
                                                  const std::vector<int>& pi,
                                                  const std::vector<int>& sigma,
                                                  const SignatureConfig& cfg = {}) {
    if (static_cast<int>(pi.size()) != mip.n || static_cast<int>(sigma.size()) != mip.m ||
        !is_bijection(pi) || !is_bijection(sigma))
        return SymmetryFailure::not_bijective;
    CoeffEq eq(cfg.tolerance_digits);

    for (int j = 0; j < mip.n; ++j) {
        size_t ju = static_cast<size_t>(j), pu = static_cast<size_t>(pi[ju]);
        if (mip.is_integer[pu] != mip.is_integer[ju]) return SymmetryFailure::integer_set;
        if (!eq.eq(mip.objective_coefficient(pi[ju]), mip.objective_coefficient(j)))
            return SymmetryFailure::objective;
        if (cfg.use_bounds) {
            if (!(mip.lower[pu] == mip.lower[ju] || eq.eq(mip.lower[pu], mip.lower[ju])))
                return SymmetryFailure::bounds;
            if (!(mip.upper[pu] == mip.upper[ju] || eq.eq(mip.upper[pu], mip.upper[ju])))
                return SymmetryFailure::bounds;
        }
    }
    for (int i = 0; i < mip.m; ++i) {
        size_t iu = static_cast<size_t>(i), su = static_cast<size_t>(sigma[iu]);
        if (!eq.eq(mip.rhs[su], mip.rhs[iu])) return SymmetryFailure::rhs;
        if (cfg.use_sense && mip.sense[su] != mip.sense[iu]) return SymmetryFailure::sense;
    }
    // A_(sigma(i), pi(j)) = A_(i,j); equal support sizes plus injectivity of
    // pi make the per-entry check cover implicit zeros in both directions
    for (int i = 0; i < mip.m; ++i) {
        const SparseVec& row = mip.rows[static_cast<size_t>(i)];
        const SparseVec& mapped = mip.rows[static_cast<size_t>(sigma[static_cast<size_t>(i)])];
        if (row.size() != mapped.size()) return SymmetryFailure::matrix;
        for (const auto& [j, v] : row) {
            auto it = mapped.find(pi[static_cast<size_t>(j)]);
            if (it == mapped.end() || !eq.eq(it->second, v)) return SymmetryFailure::matrix;
        }
    }
    return SymmetryFailure::none;
}

inline bool is_formulation_symmetry(const MipInstance& mip, const std::vector<int>& pi,
                                    const std::vector<int>& sigma,
                                    const SignatureConfig& cfg = {}) {
    return check_formulation_symmetry(mip, pi, sigma, cfg) == SymmetryFailure::none;
}

/// Extracts (pi, sigma) from an assignment over the registry's live entries.
/// Entries fixed to one are treated as set; unregistered entries as zero.
/// valid_permutation requires every row and column of both 0/1 matrices to
/// sum to exactly 1.
inline DecodedSymmetry decode(const VarRegistry& reg, const std::vector<uint8_t>& bits) {
    if (static_cast<int>(bits.size()) != reg.size())
        throw std::invalid_argument("assignment length does not match registry size");
    DecodedSymmetry d;
    d.pi.assign(static_cast<size_t>(reg.n()), -1);
    d.sigma.assign(static_cast<size_t>(reg.m()), -1);
    std::vector<int> pi_row(static_cast<size_t>(reg.n()), 0), pi_col(static_cast<size_t>(reg.n()), 0);
    std::vector<int> sg_row(static_cast<size_t>(reg.m()), 0), sg_col(static_cast<size_t>(reg.m()), 0);

    auto take = [&](const VarRef& e) {
        if (e.kind == VarKind::pi) {
            d.pi[static_cast<size_t>(e.a)] = e.b;
            ++pi_row[static_cast<size_t>(e.a)];
            ++pi_col[static_cast<size_t>(e.b)];
        } else {
            d.sigma[static_cast<size_t>(e.a)] = e.b;
            ++sg_row[static_cast<size_t>(e.a)];
            ++sg_col[static_cast<size_t>(e.b)];
        }
    };
    for (int idx = 0; idx < reg.size(); ++idx)
        if (bits[static_cast<size_t>(idx)]) take(reg.entries()[static_cast<size_t>(idx)]);
    for (const VarRef& e : reg.fixed_ones()) take(e);

    d.valid_permutation = true;
    for (int c : pi_row) d.valid_permutation &= (c == 1);
    for (int c : pi_col) d.valid_permutation &= (c == 1);
    for (int c : sg_row) d.valid_permutation &= (c == 1);
    for (int c : sg_col) d.valid_permutation &= (c == 1);
    if (!d.valid_permutation) d.failure = SymmetryFailure::not_bijective;
    return d;
}

/// decode() plus verification against the instance.
inline DecodedSymmetry decode_and_verify(const MipInstance& mip, const VarRegistry& reg,
                                         const std::vector<uint8_t>& bits,
                                         const SignatureConfig& cfg = {}) {
    DecodedSymmetry d = decode(reg, bits);
    if (!d.valid_permutation) return d;
    d.failure = check_formulation_symmetry(mip, d.pi, d.sigma, cfg);
    d.is_symmetry = (d.failure == SymmetryFailure::none);
    return d;
}

struct SymmetryPair {
    std::vector<int> pi;
    std::vector<int> sigma;

    friend bool operator<(const SymmetryPair& x, const SymmetryPair& y) {
        if (x.pi != y.pi) return x.pi < y.pi;
        return x.sigma < y.sigma;
    }
    friend bool operator==(const SymmetryPair& x, const SymmetryPair& y) {
        return x.pi == y.pi && x.sigma == y.sigma;
    }
};

namespace detail {

inline long long class_permutation_count(const std::vector<std::vector<int>>& classes,
                                         long long limit) {
    long long total = 1;
    for (const auto& c : classes) {
        for (size_t k = 2; k <= c.size(); ++k) {
            total *= static_cast<long long>(k);
            if (total > limit) return limit + 1;
        }
    }
    return total;
}

/// Enumerates every permutation that stays within the given classes, calling
/// the visitor with an index vector. Deterministic order.
template <typename Visitor>
void for_each_class_permutation(int count, const std::vector<std::vector<int>>& classes,
                                Visitor&& visit) {
    std::vector<int> perm(static_cast<size_t>(count));
    std::iota(perm.begin(), perm.end(), 0);
    // odometer over per-class permutations
    std::vector<std::vector<int>> images;
    images.reserve(classes.size());
    for (const auto& c : classes) images.push_back(c);

    std::function<void(size_t)> rec = [&](size_t k) {
        if (k == classes.size()) {
            visit(perm);
            return;
        }
        std::vector<int>& img = images[k];
        std::sort(img.begin(), img.end());
        do {
            for (size_t t = 0; t < img.size(); ++t)
                perm[static_cast<size_t>(classes[k][t])] = img[t];
            rec(k + 1);
        } while (std::next_permutation(img.begin(), img.end()));
    };
    rec(0);
}

}  // namespace detail

/// Exhaustively enumerates all reasonable (pi, sigma) pairs that are
/// formulation symmetries. Errors out when the class-wise search space
/// exceeds the limit on either side.
inline std::vector<SymmetryPair> brute_force_symmetries(const MipInstance& mip,
                                                        const ReasonabilityPartition& part,
                                                        long long limit = 1000000) {
    if (detail::class_permutation_count(part.var_classes, limit) > limit)
        throw std::invalid_argument("variable permutation search space exceeds limit");
    if (detail::class_permutation_count(part.con_classes, limit) > limit)
        throw std::invalid_argument("constraint permutation search space exceeds limit");

    std::vector<SymmetryPair> found;
    detail::for_each_class_permutation(mip.n, part.var_classes, [&](const std::vector<int>& pi) {
        detail::for_each_class_permutation(
            mip.m, part.con_classes, [&](const std::vector<int>& sigma) {
                if (is_formulation_symmetry(mip, pi, sigma, part.config))
                    found.push_back({pi, sigma});
            });
    });
    return found;
}

/// De-duplicated variable permutations from a pair list (several sigma may
/// witness the same pi).
inline std::vector<std::vector<int>> unique_pis(const std::vector<SymmetryPair>& pairs) {
    std::set<std::vector<int>> seen;
    std::vector<std::vector<int>> out;
    for (const auto& p : pairs)
        if (seen.insert(p.pi).second) out.push_back(p.pi);
    return out;
}

namespace detail {

class UnionFind {
  public:
    explicit UnionFind(int n) : parent_(static_cast<size_t>(n)), size_(static_cast<size_t>(n), 1) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    int find(int i) {
        while (parent_[static_cast<size_t>(i)] != i) {
            parent_[static_cast<size_t>(i)] =
                parent_[static_cast<size_t>(parent_[static_cast<size_t>(i)])];
            i = parent_[static_cast<size_t>(i)];
        }
        return i;
    }
    void unite(int a, int b) {
        int ra = find(a), rb = find(b);
        if (ra == rb) return;
        if (size_[static_cast<size_t>(ra)] < size_[static_cast<size_t>(rb)]) std::swap(ra, rb);
        parent_[static_cast<size_t>(rb)] = ra;
        size_[static_cast<size_t>(ra)] += size_[static_cast<size_t>(rb)];
    }

  private:
    std::vector<int> parent_;
    std::vector<int> size_;
};

}  // namespace detail

/// Orbits of {0..n-1} under a generator set: connected components of the
/// union of the generators' functional graphs. Members and orbit list are
/// sorted ascending.
inline std::vector<std::vector<int>> orbits(int n, const std::vector<std::vector<int>>& generators) {
    detail::UnionFind uf(n);
    for (const auto& g : generators) {
        if (static_cast<int>(g.size()) != n || !is_bijection(g))
            throw std::invalid_argument("generator is not a bijection on {0..n-1}");
        for (int j = 0; j < n; ++j) uf.unite(j, g[static_cast<size_t>(j)]);
    }
    std::map<int, std::vector<int>> groups;
    for (int j = 0; j < n; ++j) groups[uf.find(j)].push_back(j);
    std::vector<std::vector<int>> out;
    out.reserve(groups.size());
    for (auto& [root, members] : groups) {
        (void)root;
        out.push_back(std::move(members));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

}  // namespace mipsym
