/// @file mapped_series.hpp
/// @brief Exact composition of a divergent series with the conformal map.
///
/// With g = rho lambda (1-lambda)^{-alpha}, the function
/// phi(lambda) = (1-lambda)^{alpha beta} E(g(lambda)) is a power series in
/// lambda whose coefficients are polynomials P_l(rho) of degree l:
///   P_l(rho) = sum_{m<=l} E_m rho^m (-1)^{l-m} binom(alpha(beta - m), l - m).
/// Truncating at l = k and evaluating back at lambda(g) defines the k-th
/// approximant. All P_l coefficients are exact rationals.

#ifndef ODM_MAPPED_SERIES_HPP
#define ODM_MAPPED_SERIES_HPP

#include "fps.hpp"
#include "numeric.hpp"
#include "power_series.hpp"
#include "rational_poly.hpp"

#include <vector>

namespace odm {

struct MappedSeries {
    std::string model;
    Rational alpha{0};
    Rational beta{0};
    Rational A{0};
    unsigned K{0};            // highest retained order
    std::vector<RatPoly> P;   // P[l], l = 0..K, deg P[l] = l

    const RatPoly& at(unsigned l) const {
        if (l >= P.size()) throw domain_error("mapped series order exceeded");
        return P[l];
    }
};

inline MappedSeries compose_mapped_series(const PowerSeries& s) {
    if (s.coeffs.empty()) throw domain_error("compose_mapped_series: empty series");
    MappedSeries ms;
    ms.model = s.model;
    ms.alpha = s.alpha;
    ms.beta = s.beta;
    ms.A = s.A;
    ms.K = s.order();
    ms.P.assign(ms.K + 1, RatPoly());
    for (unsigned l = 0; l <= ms.K; ++l) ms.P[l].assign(l + 1, Rational(0));

    // column m: E_m (-1)^j binom(alpha(beta-m), j) feeds P_{m+j}[m]
    for (unsigned m = 0; m <= ms.K; ++m) {
        if (s.coeffs[m] == 0) continue;
        const Rational expo = s.alpha * (s.beta - Rational(m));
        Rational binom_j(1); // binom(expo, j), updated incrementally
        for (unsigned j = 0; m + j <= ms.K; ++j) {
            if (j > 0) binom_j *= (expo - Rational(j - 1)) / Rational(j);
            Rational term = s.coeffs[m] * binom_j;
            if (j % 2) term = -term;
            ms.P[m + j][m] = term;
        }
    }
    return ms;
}

// phi truncated at order k, evaluated at complex lambda:
// sum_{l<=k} P_l(rho) lambda^l.
inline Cplx mapped_partial_sum(const MappedSeries& ms, const Cplx& rho, unsigned k,
                               const Cplx& lambda) {
    if (k > ms.K) throw domain_error("mapped_partial_sum: order exceeds series");
    Cplx acc(0);
    for (unsigned l = k + 1; l-- > 0;) acc = acc * lambda + poly_eval(ms.P[l], rho);
    return acc;
}

// Exact identity check: substituting the series inverse lambda(g) back into
// the truncated phi and stripping the prefactor must reproduce E_0..E_k for
// any rational rho. Returns the reconstructed coefficients.
inline std::vector<Rational> mapped_back_substitute(const MappedSeries& ms, const Rational& rho,
                                                    unsigned k) {
    if (k > ms.K) throw domain_error("mapped_back_substitute: order exceeds series");
    auto lam = fps_lambda_of_g(rho, ms.alpha, k);
    std::vector<Rational> pvals(k + 1);
    for (unsigned l = 0; l <= k; ++l) pvals[l] = poly_eval(ms.P[l], rho);
    auto phi = fps_compose_poly(pvals, lam, k);
    // multiply by (1 - lambda(g))^{-alpha beta}
    RatSeries one_minus(lam.size());
    one_minus[0] = 1 - lam[0];
    for (size_t i = 1; i < lam.size(); ++i) one_minus[i] = -lam[i];
    auto pref = fps_pow(one_minus, -ms.alpha * ms.beta, k);
    return fps_mul(phi, pref, k);
}

} // namespace odm

#endif
