/// @file fps.hpp
/// @brief Truncated formal power series over the rationals.
///
/// Small utility layer used for exact series identities: truncated products,
/// powers with rational exponent, and the series inverse of the conformal
/// map. All operations are exact.

#ifndef ODM_FPS_HPP
#define ODM_FPS_HPP

#include "numeric.hpp"

#include <cstddef>
#include <vector>

namespace odm {

// coefficients c[0..K] of a series truncated after order K
using RatSeries = std::vector<Rational>;

inline RatSeries fps_mul(const RatSeries& a, const RatSeries& b, size_t K) {
    RatSeries r(K + 1, Rational(0));
    for (size_t i = 0; i < a.size() && i <= K; ++i) {
        if (a[i] == 0) continue;
        size_t jmax = std::min(b.size(), K + 1 - i);
        for (size_t j = 0; j < jmax; ++j) {
            if (b[j] == 0) continue;
            r[i + j] += a[i] * b[j];
        }
    }
    return r;
}

// u^s for rational exponent s; requires u[0] == 1.
// Recurrence: n u0 w_n = sum_{j=1..n} ((s+1) j - n) u_j w_{n-j}.
inline RatSeries fps_pow(const RatSeries& u, const Rational& s, size_t K) {
    if (u.empty() || u[0] != 1)
        throw domain_error("fps_pow requires constant term 1");
    RatSeries w(K + 1, Rational(0));
    w[0] = 1;
    for (size_t n = 1; n <= K; ++n) {
        Rational acc(0);
        size_t jmax = std::min(u.size() - 1, n);
        for (size_t j = 1; j <= jmax; ++j) {
            if (u[j] == 0) continue;
            acc += ((s + 1) * Rational(j) - Rational(n)) * u[j] * w[n - j];
        }
        w[n] = acc / Rational(n);
    }
    return w;
}

// Series lambda(g) solving lambda = (g/rho) (1-lambda)^alpha, as a power
// series in g to order K; rho and alpha rational, alpha arbitrary.
// Fixed-point iteration gains one correct order per pass.
inline RatSeries fps_lambda_of_g(const Rational& rho, const Rational& alpha, size_t K) {
    if (rho == 0) throw domain_error("rho must be nonzero");
    RatSeries lam(K + 1, Rational(0));
    for (size_t pass = 0; pass < K; ++pass) {
        RatSeries one_minus(lam.size());
        one_minus[0] = 1 - lam[0];
        for (size_t i = 1; i < lam.size(); ++i) one_minus[i] = -lam[i];
        RatSeries w = fps_pow(one_minus, alpha, K);
        RatSeries next(K + 1, Rational(0));
        for (size_t i = 0; i + 1 <= K; ++i) next[i + 1] = w[i] / rho;
        if (next == lam) break;
        lam = std::move(next);
    }
    return lam;
}

// phi(lambda(g)) for a polynomial phi given by values p[0..k] (phi = sum p_l lambda^l),
// truncated at order K in g.
inline RatSeries fps_compose_poly(const std::vector<Rational>& p, const RatSeries& lam, size_t K) {
    RatSeries r(K + 1, Rational(0));
    if (p.empty()) return r;
    // Horner in lambda
    for (size_t i = p.size(); i-- > 0;) {
        r = fps_mul(r, lam, K);
        r[0] += p[i];
    }
    return r;
}

} // namespace odm

#endif
