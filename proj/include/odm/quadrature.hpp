/// @file quadrature.hpp
/// @brief Gauss-Legendre rules at working precision, cached per (n, bits).

#ifndef ODM_QUADRATURE_HPP
#define ODM_QUADRATURE_HPP

#include "numeric.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

namespace odm {

struct GaussRule {
    std::vector<Real> nodes;   // on (-1, 1), ascending
    std::vector<Real> weights;
};

namespace detail {

// P_n(x) and P_n'(x) by the three-term recurrence.
inline std::pair<Real, Real> legendre_pair(unsigned n, const Real& x) {
    Real p0(1), p1 = x;
    for (unsigned k = 2; k <= n; ++k) {
        Real p2 = ((2 * Real(k) - 1) * x * p1 - (Real(k) - 1) * p0) / Real(k);
        p0 = p1;
        p1 = p2;
    }
    Real dp = n * (x * p1 - p0) / (x * x - 1);
    return {p1, dp};
}

} // namespace detail

// n-point rule; roots polished by Newton from the Chebyshev-like estimate.
// The cache is shared across threads; rules are immutable once inserted.
inline const GaussRule& gauss_legendre(unsigned n) {
    static std::map<std::pair<unsigned, unsigned>, std::unique_ptr<GaussRule>> cache;
    static std::mutex cache_mutex;
    auto key = std::make_pair(n, precision_bits());
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
    if (n < 2) throw domain_error("gauss_legendre: need at least 2 nodes");

    auto rule = std::make_unique<GaussRule>();
    rule->nodes.resize(n);
    rule->weights.resize(n);
    const Real tol = pow10(-static_cast<long>(precision_digits()) + 2);
    for (unsigned i = 0; i < n; ++i) {
        double est = std::cos(3.141592653589793 * (i + 0.75) / (n + 0.5));
        Real x(-est); // ascending order
        for (int iter = 0; iter < 200; ++iter) {
            auto [p, dp] = detail::legendre_pair(n, x);
            Real step = p / dp;
            x -= step;
            if (abs(step) <= tol) break;
        }
        auto [p, dp] = detail::legendre_pair(n, x);
        rule->nodes[i] = x;
        rule->weights[i] = 2 / ((1 - x * x) * dp * dp);
    }
    auto [pos, inserted] = cache.emplace(std::move(key), std::move(rule));
    return *pos->second;
}

} // namespace odm

#endif
