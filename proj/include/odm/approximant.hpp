/// @file approximant.hpp
/// @brief Order-k summation of the mapped series at finite and infinite g.

#ifndef ODM_APPROXIMANT_HPP
#define ODM_APPROXIMANT_HPP

#include "mapped_series.hpp"
#include "mapping.hpp"

namespace odm {

struct Approximant {
    unsigned k{0};
    Cplx rho;
    Cplx g;
    Cplx lambda;
    Cplx value;
    Real err_est{0}; // magnitude of the first dropped term
};

// |(1-lambda)^{-alpha beta} P_{k+1}(rho) lambda^{k+1}|: the first term the
// order-k approximant drops. Requires k+1 <= K.
inline Real error_estimate(const MappedSeries& ms, const Cplx& rho, unsigned k,
                           const Cplx& lambda) {
    if (k + 1 > ms.K)
        throw domain_error("error_estimate: needs P_{k+1}, raise the series order");
    Real ab = to_real(ms.alpha * ms.beta);
    return abs(poly_eval(ms.P[k + 1], rho)) * pow(abs(lambda), Real(k + 1)) *
           pow(abs(Cplx(1) - lambda), -ab);
}

// Dropped-term magnitude in the strong-coupling limit lambda -> 1:
// |P_{k+1}(rho)| |rho|^{-Re beta}.
inline Real strong_coupling_error(const MappedSeries& ms, const Cplx& rho, unsigned k) {
    if (k + 1 > ms.K)
        throw domain_error("strong_coupling_error: needs P_{k+1}, raise the series order");
    return abs(poly_eval(ms.P[k + 1], rho)) * pow(abs(rho), -to_real(ms.beta));
}

inline Approximant eval_approximant(const MappedSeries& ms, const Cplx& rho, unsigned k,
                                    const Cplx& g, Side side = Side::automatic) {
    if (k > ms.K) throw domain_error("eval_approximant: order exceeds series");
    Approximant ap;
    ap.k = k;
    ap.rho = rho;
    ap.g = g;
    ap.lambda = invert_map(g, rho, ms.alpha, side);
    Cplx pref = pow(Cplx(1) - ap.lambda, -to_real(ms.alpha * ms.beta));
    ap.value = pref * mapped_partial_sum(ms, rho, k, ap.lambda);
    ap.err_est = (k + 1 <= ms.K) ? error_estimate(ms, rho, k, ap.lambda) : Real(0);
    return ap;
}

// lambda = 1 limit of the order-k approximant: rho^{-beta} sum_{l<=k} P_l(rho).
// The leading strong-coupling coefficient of E(g) ~ E_inf g^{beta} then is
// estimate ~ E_inf as k grows.
inline Cplx strong_coupling_estimate(const MappedSeries& ms, const Cplx& rho, unsigned k) {
    if (k > ms.K) throw domain_error("strong_coupling_estimate: order exceeds series");
    Cplx sum(0);
    for (unsigned l = 0; l <= k; ++l) sum += poly_eval(ms.P[l], rho);
    return pow(rho, -to_real(ms.beta)) * sum;
}

} // namespace odm

#endif
