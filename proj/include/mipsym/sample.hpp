#pragma once

/// Solvers for the symmetry-detecting models: exhaustive enumeration at tiny
/// scale (the verification path) and restarted single-flip Metropolis
/// annealing at desk scale.
///
/// Both maintain the energy incrementally through per-variable adjacency
/// lists; any assignment reported at or below the target is re-evaluated
/// against the model's coefficient maps first, so reported energies are
/// exact and immune to incremental drift.

#include <atomic>
#include <bit>
#include <cmath>
#include <future>
#include <random>
#include <set>
#include <thread>

#include "mipsym/qubo.hpp"

namespace mipsym {

struct AnnealConfig {
    uint64_t seed = 0;
    int restarts = 64;
    int sweeps = 2000;
    /// Temperatures <= 0 are derived from the model: initial from the
    /// largest absolute coefficient, final as 1e-3 times the smallest
    /// nonzero absolute coefficient.
    double initial_temperature = 0.0;
    double final_temperature = 0.0;

    void validate() const {
        if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
        if (sweeps < 1) throw std::invalid_argument("sweeps must be >= 1");
    }
};

struct SampleResult {
    std::vector<uint8_t> assignment;
    double energy = 0.0;
    int restarts_used = 0;
    uint64_t seed = 0;
};

struct AnnealOutput {
    SampleResult best;
    /// Distinct assignments whose exact energy is 0, in deterministic
    /// (restart index, discovery) order.
    std::vector<std::vector<uint8_t>> zero_energy;
};

struct ExactHit {
    std::vector<uint8_t> assignment;
    double energy = 0.0;
};

namespace detail {

struct Adjacency {
    std::vector<double> linear;
    std::vector<std::vector<std::pair<int, double>>> neighbors;

    explicit Adjacency(const QuboModel& model) {
        size_t q = static_cast<size_t>(model.registry().size());
        linear.assign(q, 0.0);
        neighbors.assign(q, {});
        for (const auto& [i, v] : model.linear()) linear[static_cast<size_t>(i)] = v;
        for (const auto& [key, v] : model.quadratic()) {
            neighbors[static_cast<size_t>(key.first)].emplace_back(key.second, v);
            neighbors[static_cast<size_t>(key.second)].emplace_back(key.first, v);
        }
    }

    /// Energy change if bit v flips from its current state.
    double flip_delta(const std::vector<uint8_t>& x, int v) const {
        double field = linear[static_cast<size_t>(v)];
        for (const auto& [u, w] : neighbors[static_cast<size_t>(v)])
            if (x[static_cast<size_t>(u)]) field += w;
        return x[static_cast<size_t>(v)] ? -field : field;
    }
};

inline uint64_t splitmix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Complete enumeration of all assignments with exact energy <= target,
/// returned in ascending bit-pattern order (variable 0 is the lowest bit).
/// Uses a Gray-code sweep internally; rejects registries above the limit.
inline std::vector<ExactHit> enumerate_exact(const QuboModel& model, int limit = 24,
                                             double target = 0.0) {
    const int q = model.registry().size();
    if (q > limit)
        throw std::invalid_argument("registry too large for exact enumeration (" +
                                    std::to_string(q) + " > " + std::to_string(limit) + ")");
    detail::Adjacency adj(model);
    // loose incremental-drift guard; candidates are re-evaluated exactly
    const double guard = 1e-7 * std::max(1.0, model.max_abs_coefficient()) + 1e-12;

    std::vector<uint8_t> x(static_cast<size_t>(q), 0);
    std::vector<uint64_t> masks;
    double e = model.offset();
    uint64_t mask = 0;
    if (e <= target + guard) masks.push_back(0);
    const uint64_t count = q >= 64 ? 0 : (uint64_t{1} << q);
    for (uint64_t t = 1; t < count; ++t) {
        int v = std::countr_zero(t);  // Gray code: bit v flips between t-1 and t
        e += adj.flip_delta(x, v);
        x[static_cast<size_t>(v)] ^= 1;
        mask ^= uint64_t{1} << v;
        if (e <= target + guard) masks.push_back(mask);
    }
    std::sort(masks.begin(), masks.end());

    std::vector<ExactHit> hits;
    for (uint64_t m : masks) {
        ExactHit h;
        h.assignment.assign(static_cast<size_t>(q), 0);
        for (int v = 0; v < q; ++v) h.assignment[static_cast<size_t>(v)] = (m >> v) & 1;
        h.energy = model.energy(h.assignment);
        if (h.energy <= target) hits.push_back(std::move(h));
    }
    return hits;
}

namespace detail {

struct RestartResult {
    std::vector<uint8_t> best_state;
    double best_energy = kInfinity;
    std::vector<std::vector<uint8_t>> zeros;
};

inline RestartResult run_restart(const QuboModel& model, const Adjacency& adj, uint64_t seed,
                                 int restart, int sweeps, double t_init, double t_final) {
    const int q = model.registry().size();
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<uint64_t>(restart) + 1)));

    RestartResult res;
    std::vector<uint8_t> x(static_cast<size_t>(q));
    for (int v = 0; v < q; ++v) x[static_cast<size_t>(v)] = static_cast<uint8_t>(rng() & 1);
    double e = model.energy(x);
    res.best_state = x;
    res.best_energy = e;

    std::set<std::vector<uint8_t>> seen_zeros;
    const double cool = sweeps > 1 ? std::pow(t_final / t_init, 1.0 / (sweeps - 1)) : 1.0;
    double temperature = t_init;
    const double zero_guard = 1e-7 * std::max(1.0, model.max_abs_coefficient()) + 1e-12;

    for (int sweep = 0; sweep < sweeps; ++sweep, temperature *= cool) {
        for (int v = 0; v < q; ++v) {
            double delta = adj.flip_delta(x, v);
            if (delta > 0.0 && uniform01(rng) >= std::exp(-delta / temperature)) continue;
            x[static_cast<size_t>(v)] ^= 1;
            e += delta;
            if (e < res.best_energy) {
                res.best_energy = e;
                res.best_state = x;
            }
            if (e <= zero_guard && model.energy(x) == 0.0 && seen_zeros.insert(x).second)
                res.zeros.push_back(x);
        }
        if (!res.zeros.empty()) break;  // zero-energy early exit
    }
    res.best_energy = model.energy(res.best_state);
    return res;
}

}  // namespace detail

/// Restarted simulated annealing. Deterministic for a fixed (model, config):
/// each restart owns an RNG derived from (seed, restart index), restarts run
/// in parallel, and results are merged in restart order.
inline AnnealOutput anneal(const QuboModel& model, const AnnealConfig& config = {}) {
    config.validate();
    const int q = model.registry().size();
    if (q == 0) throw std::invalid_argument("model has no live variables");
    detail::Adjacency adj(model);

    double t_init = config.initial_temperature;
    if (t_init <= 0.0) t_init = std::max(model.max_abs_coefficient(), 1.0);
    double t_final = config.final_temperature;
    if (t_final <= 0.0) t_final = 1e-3 * std::max(model.min_abs_coefficient(), 1e-6);
    t_final = std::min(t_final, t_init);

    std::vector<detail::RestartResult> results(static_cast<size_t>(config.restarts));
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::future<void>> futures;
    std::atomic<int> next{0};
    for (unsigned w = 0; w < workers; ++w)
        futures.push_back(std::async(std::launch::async, [&] {
            for (int r; (r = next.fetch_add(1)) < config.restarts;)
                results[static_cast<size_t>(r)] = detail::run_restart(
                    model, adj, config.seed, r, config.sweeps, t_init, t_final);
        }));
    for (auto& f : futures) f.get();

    AnnealOutput out;
    out.best.seed = config.seed;
    out.best.restarts_used = config.restarts;
    out.best.energy = kInfinity;
    std::set<std::vector<uint8_t>> seen;
    for (int r = 0; r < config.restarts; ++r) {
        const auto& res = results[static_cast<size_t>(r)];
        if (res.best_energy < out.best.energy) {
            out.best.energy = res.best_energy;
            out.best.assignment = res.best_state;
        }
        for (const auto& z : res.zeros)
            if (seen.insert(z).second) out.zero_energy.push_back(z);
    }
    return out;
}

}  // namespace mipsym
