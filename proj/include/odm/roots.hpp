/// @file roots.hpp
/// @brief Simultaneous polynomial root finding at working precision.
///
/// Aberth-Ehrlich iteration over the hand-rolled complex type, seeded from
/// the Newton-polygon (convex hull of (i, log|c_i|)) radii so that huge
/// coefficient ranges do not overflow anything. Every returned root is
/// certified a posteriori by a backward-error bound: |p(r)| must not exceed
/// 10^-(P-8) times the evaluated magnitude sum |c_i||r|^i at the requested
/// precision of P decimal digits.

#ifndef ODM_ROOTS_HPP
#define ODM_ROOTS_HPP

#include "complex.hpp"
#include "numeric.hpp"
#include "rational_poly.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace odm {
namespace detail {

struct HornerPair {
    Cplx p, dp;
    Real scale; // sum |c_i| |z|^i, the backward-error yardstick
};

inline HornerPair eval_with_derivative(const std::vector<Cplx>& c, const Cplx& z) {
    Cplx p(0), dp(0);
    Real scale(0), az = abs(z);
    for (size_t i = c.size(); i-- > 0;) {
        dp = dp * z + p;
        p = p * z + c[i];
        scale = scale * az + abs(c[i]);
    }
    return {p, dp, scale};
}

// Newton-polygon initial guesses (Bini's scheme, double precision suffices).
inline std::vector<Cplx> initial_guesses(const std::vector<Cplx>& c) {
    const size_t n = c.size() - 1;
    std::vector<std::pair<size_t, double>> pts;
    for (size_t i = 0; i <= n; ++i) {
        if (abs(c[i]) == 0) continue;
        pts.emplace_back(i, log(abs(c[i])).convert_to<double>());
    }
    // upper convex hull over increasing index
    std::vector<std::pair<size_t, double>> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            auto& a = hull[hull.size() - 2];
            auto& b = hull[hull.size() - 1];
            double cross = (double)(b.first - a.first) * (pt.second - a.second) -
                           (double)(pt.first - a.first) * (b.second - a.second);
            if (cross >= 0) hull.pop_back();
            else break;
        }
        hull.push_back(pt);
    }
    std::vector<Cplx> z;
    z.reserve(n);
    for (size_t seg = 0; seg + 1 < hull.size(); ++seg) {
        size_t k1 = hull[seg].first, k2 = hull[seg + 1].first;
        double r = std::exp((hull[seg].second - hull[seg + 1].second) / (double)(k2 - k1));
        size_t m = k2 - k1;
        for (size_t j = 0; j < m; ++j) {
            double th = 6.2831853071795864769 * ((double)j / (double)m + (double)seg / (double)(n + 1)) + 0.7;
            z.emplace_back(Real(r * std::cos(th)), Real(r * std::sin(th)));
        }
    }
    return z;
}

// Aberth-Ehrlich sweep iteration; coefficients ascending, leading != 0.
inline std::vector<Cplx> aberth(const std::vector<Cplx>& c) {
    const size_t n = c.size() - 1;
    if (n == 0) return {};
    if (n == 1) return {Cplx(0) - c[0] / c[1]};

    std::vector<Cplx> z = initial_guesses(c);
    const Real tol = pow10(-static_cast<long>(precision_digits()) + 4);
    // |p(z)| below this times the magnitude sum is evaluation noise: done
    const Real eps = boost::multiprecision::ldexp(Real(1), -static_cast<long>(precision_bits()) + 10);
    const int max_sweeps = 600;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool all_done = true;
        for (size_t i = 0; i < n; ++i) {
            auto [p, dp, scale] = eval_with_derivative(c, z[i]);
            if (abs(p) <= eps * scale) continue;
            if (abs(dp) == 0) {
                z[i] += Cplx(tol, tol);
                all_done = false;
                continue;
            }
            Cplx N = p / dp;
            Cplx S(0);
            for (size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                Cplx d = z[i] - z[j];
                if (abs(d) == 0) d = Cplx(tol, tol);
                S += Cplx(1) / d;
            }
            Cplx denom = Cplx(1) - N * S;
            Cplx w = (abs(denom) == 0) ? N : N / denom;
            z[i] -= w;
            if (abs(w) > tol * (abs(z[i]) + 1)) all_done = false;
        }
        if (all_done) return z;
    }
    throw convergence_error("aberth: no convergence after 600 sweeps");
}

inline void certify_roots(const std::vector<Cplx>& c, const std::vector<Cplx>& roots,
                          unsigned digits) {
    const Real thresh = pow10(-static_cast<long>(digits) + 8);
    for (const auto& r : roots) {
        Cplx p(0);
        Real scale(0);
        Real rp = abs(r);
        for (size_t i = c.size(); i-- > 0;) {
            p = p * r + c[i];
            scale = scale * rp + abs(c[i]);
        }
        if (scale < 1) scale = 1;
        if (abs(p) > thresh * scale)
            throw convergence_error("root certification failed: residual " + str(abs(p) / scale, 3) +
                                    " at root " + str(r, 8));
    }
}

inline void sort_roots(std::vector<Cplx>& roots) {
    std::sort(roots.begin(), roots.end(), [](const Cplx& a, const Cplx& b) {
        if (a.re != b.re) return a.re > b.re;
        return a.im < b.im;
    });
}

} // namespace detail

// All complex roots of an exact-rational polynomial, computed and certified
// at `prec_bits` (0 means ambient precision). Zero roots from a vanishing
// constant term are returned exactly.
inline std::vector<Cplx> polynomial_roots(const RatPoly& p, unsigned prec_bits = 0) {
    RatPoly q = p;
    poly_trim(q);
    if (poly_degree(q) < 1)
        throw domain_error("polynomial_roots: degree must be at least 1");
    if (prec_bits == 0) prec_bits = precision_bits();

    size_t zeros = 0;
    while (q.front() == 0) {
        q.erase(q.begin());
        ++zeros;
    }

    std::vector<Cplx> roots;
    {
        PrecisionGuard guard(prec_bits + 64);
        auto c = poly_to_cplx(q);
        roots = q.size() > 1 ? detail::aberth(c) : std::vector<Cplx>{};
    }
    {
        PrecisionGuard guard(prec_bits);
        // round into the requested precision; coefficients are real, so
        // imaginary parts below certification resolution are noise
        const Real snap = pow10(-static_cast<long>(bits_to_digits(prec_bits)) + 8);
        for (auto& r : roots) {
            r = Cplx(Real(r.re), Real(r.im));
            if (abs(r.im) <= (abs(r.re) + 1) * snap) r.im = 0;
        }
        detail::certify_roots(poly_to_cplx(q), roots, bits_to_digits(prec_bits));
    }
    for (size_t i = 0; i < zeros; ++i) roots.emplace_back(Real(0));
    detail::sort_roots(roots);
    return roots;
}

// Same engine for complex coefficient vectors (used by the saddle search).
inline std::vector<Cplx> complex_poly_roots(std::vector<Cplx> c) {
    while (!c.empty() && abs(c.back()) == 0) c.pop_back();
    if (c.size() < 2) throw domain_error("complex_poly_roots: degree must be at least 1");
    size_t zeros = 0;
    while (abs(c.front()) == 0) {
        c.erase(c.begin());
        ++zeros;
    }
    std::vector<Cplx> roots;
    {
        PrecisionGuard guard(precision_bits() + 64);
        roots = c.size() > 1 ? detail::aberth(c) : std::vector<Cplx>{};
    }
    detail::certify_roots(c, roots, precision_digits());
    for (size_t i = 0; i < zeros; ++i) roots.emplace_back(Real(0));
    detail::sort_roots(roots);
    return roots;
}

} // namespace odm

#endif
