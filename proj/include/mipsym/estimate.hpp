#pragma once

/// Zephyr-topology sizing and report regressions.

#include <cmath>
#include <span>
#include <utility>

#include "mipsym/qubo.hpp"

namespace mipsym {

/// Clique-embedding bound for a q-variable QUBO on a Zephyr graph with tile
/// parameter 4: the largest complete graph embeddable on Z_g has 16g-8
/// vertices, so g = ceil((q+8)/16) and the bound below counts the qubits of
/// the K_(q+8... ) chains, ceiled to an integer.
struct ZephyrEstimate {
    long long q = 0;
    long long g = 0;            ///< grid parameter
    long long qubit_bound = 0;  ///< ceil((q+8)^2/8 + (q+8))
    long long zephyr_total = 0; ///< 32g^2 + 16g qubits in Z_g
};

inline ZephyrEstimate zephyr_estimate(long long q) {
    if (q < 1) throw std::invalid_argument("variable count must be >= 1");
    ZephyrEstimate z;
    z.q = q;
    const long long s = q + 8;
    z.g = (s + 15) / 16;
    z.qubit_bound = s + (s * s + 7) / 8;
    z.zephyr_total = 32 * z.g * z.g + 16 * z.g;
    return z;
}

struct TermCounts {
    std::size_t linear = 0;
    std::size_t quadratic = 0;
    std::size_t total = 0;
};

inline TermCounts count_terms(const QuboModel& model) {
    TermCounts c;
    c.linear = model.linear().size();
    c.quadratic = model.quadratic().size();
    c.total = c.linear + c.quadratic;
    return c;
}

/// Least-squares exponent for the model y = x^k (zero intercept in log
/// space): k = sum(ln x * ln y) / sum(ln x ^ 2). Requires positive
/// coordinates and at least one x != 1.
inline double power_fit(std::span<const std::pair<double, double>> points) {
    if (points.empty()) throw std::invalid_argument("power_fit: no data points");
    double num = 0.0, den = 0.0;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0))
            throw std::invalid_argument("power_fit: coordinates must be positive");
        double lx = std::log(x);
        num += lx * std::log(y);
        den += lx * lx;
    }
    if (den == 0.0) throw std::invalid_argument("power_fit: all x equal 1");
    return num / den;
}

/// Zero-intercept linear fit y = a*x: a = sum(x*y) / sum(x^2).
inline double linear_fit_through_origin(std::span<const std::pair<double, double>> points) {
    if (points.empty()) throw std::invalid_argument("linear fit: no data points");
    double num = 0.0, den = 0.0;
    for (const auto& [x, y] : points) {
        num += x * y;
        den += x * x;
    }
    if (den == 0.0) throw std::invalid_argument("linear fit: all x are zero");
    return num / den;
}

}  // namespace mipsym
