/// @file saddle.hpp
/// @brief Saddle-point analysis of the mapped-series convergence rate.
///
/// Everything here lives in the scaled parameter mu = k rho / A held fixed
/// as the order grows. Contributions to P_k behave like e^(k sigma) with
///     sigma(lambda) = (1-lambda)^alpha / (lambda mu) - ln(lambda),
/// stationary where
///     (1-lambda)^(alpha-1) (1 + (alpha-1) lambda) + lambda mu = 0.
/// For rational alpha = p/q the stationarity condition becomes a polynomial
/// in t with 1 - lambda = t^q; candidate roots are mapped back and kept only
/// if they satisfy the original equation on the principal branch.

#ifndef ODM_SADDLE_HPP
#define ODM_SADDLE_HPP

#include "complex.hpp"
#include "numeric.hpp"
#include "roots.hpp"

#include <algorithm>
#include <vector>

namespace odm {

// sigma = (1-lambda)^alpha / (lambda mu) - ln(lambda), principal branch;
// for lambda < 0 its real part carries the ln|lambda| convention.
inline Cplx sigma(const Rational& alpha, const Real& mu, const Cplx& lambda) {
    if (!(mu > 0)) throw domain_error("sigma: mu must be positive");
    if ((lambda.re == 0 && lambda.im == 0) || (lambda.re == 1 && lambda.im == 0))
        throw domain_error("sigma: lambda must avoid 0 and 1");
    Cplx one_m = Cplx(1) - lambda;
    return pow(one_m, to_real(alpha)) / (lambda * mu) - log(lambda);
}

namespace detail {

// Value of the stationarity condition and its lambda-derivative, real form.
inline Real saddle_fn(const Rational& alpha, const Real& mu, const Real& lambda) {
    Real a = to_real(alpha);
    return pow(1 - lambda, a - 1) * (1 + (a - 1) * lambda) + lambda * mu;
}

inline Real saddle_fn_d(const Rational& alpha, const Real& mu, const Real& lambda) {
    Real a = to_real(alpha);
    return -a * (a - 1) * lambda * pow(1 - lambda, a - 2) + mu;
}

} // namespace detail

// The unique real stationary point in (-1/(alpha-1), 0).
inline Real real_saddle(const Rational& alpha, const Real& mu) {
    if (alpha <= 1) throw domain_error("real_saddle: alpha must exceed 1");
    if (!(mu > 0)) throw domain_error("real_saddle: mu must be positive");
    Real lo = -1 / (to_real(alpha) - 1), hi(0);
    // F(hi-) = 1 > 0, F(lo+) = lo mu < 0; F is increasing in between
    Real a = lo, b = hi;
    for (int i = 0; i < 80; ++i) {
        Real mid = (a + b) / 2;
        if (detail::saddle_fn(alpha, mu, mid) < 0) a = mid;
        else b = mid;
    }
    Real x = (a + b) / 2;
    const Real tol = pow10(-static_cast<long>(precision_digits()) + 6);
    for (int i = 0; i < 200; ++i) {
        Real step = detail::saddle_fn(alpha, mu, x) / detail::saddle_fn_d(alpha, mu, x);
        x -= step;
        if (x <= lo) x = (a + lo) / 2;
        if (x >= hi) x = b / 2;
        if (abs(step) <= tol * abs(x)) return x;
    }
    throw convergence_error("real_saddle: Newton did not converge");
}

// All stationary points of sigma for rational alpha = p/q, found through the
// substitution 1 - lambda = t^q and filtered on the original equation.
inline std::vector<Cplx> saddle_points(const Rational& alpha, const Real& mu) {
    if (alpha <= 1) throw domain_error("saddle_points: alpha must exceed 1");
    if (!(mu > 0)) throw domain_error("saddle_points: mu must be positive");
    long p = numerator(alpha).convert_to<long>();
    long q = denominator(alpha).convert_to<long>();

    // alpha t^(p-q) + (1-alpha) t^p - mu t^q + mu = 0
    std::vector<Cplx> c(static_cast<size_t>(p) + 1, Cplx(0));
    Real a = to_real(alpha);
    c[static_cast<size_t>(p - q)] += Cplx(a);
    c[static_cast<size_t>(p)] += Cplx(1 - a);
    c[static_cast<size_t>(q)] += Cplx(-mu);
    c[0] += Cplx(mu);

    auto troots = complex_poly_roots(c);

    const Real resid_cap = Real("1e-10");
    const Real dedupe = pow10(-static_cast<long>(precision_digits()) + 24);
    std::vector<Cplx> out;
    for (const auto& t : troots) {
        Cplx lambda = Cplx(1) - pow_int(t, q);
        if (abs(lambda) == 0 || abs(lambda - Cplx(1)) == 0) continue;
        Cplx resid = pow(Cplx(1) - lambda, to_real(alpha) - 1) *
                         (Cplx(1) + (to_real(alpha) - 1) * lambda) +
                     lambda * mu;
        if (abs(resid) > resid_cap * (1 + mu * abs(lambda))) continue;
        bool dup = false;
        for (const auto& seen : out)
            if (abs(seen - lambda) <= dedupe * (1 + abs(lambda))) dup = true;
        if (!dup) out.push_back(lambda);
    }
    if (out.empty())
        throw convergence_error("saddle_points: no candidate passed the residual filter");
    detail::sort_roots(out);
    return out;
}

// Critical point: the mu where sigma vanishes at the real stationary point.
// Eliminating mu reduces the pair of conditions to
//     h(lambda) = -(1-lambda)/(1+(alpha-1)lambda) - ln(-lambda) = 0
// which is strictly increasing on (-1/(alpha-1), 0).
struct CriticalPoint {
    Real mu_c;
    Real lambda_c; // negative
};

inline CriticalPoint critical_mu(const Rational& alpha) {
    if (alpha <= 1) throw domain_error("critical_mu: alpha must exceed 1");
    Real a = to_real(alpha);
    Real lo = -1 / (a - 1), hi(0);
    auto h = [&](const Real& l) { return -(1 - l) / (1 + (a - 1) * l) - log(-l); };
    Real x1 = lo * (1 - Real(1) / 1024), x2 = lo / Real("1e6");
    if (!(h(x1) < 0 && h(x2) > 0))
        throw convergence_error("critical_mu: bracketing failed");
    for (int i = 0; i < 80; ++i) {
        Real mid = (x1 + x2) / 2;
        if (h(mid) < 0) x1 = mid;
        else x2 = mid;
    }
    Real x = (x1 + x2) / 2;
    const Real tol = pow10(-static_cast<long>(precision_digits()) + 6);
    for (int i = 0; i < 200; ++i) {
        Real d = 1 + (a - 1) * x;
        Real hd = a / (d * d) - 1 / x;
        Real step = h(x) / hd;
        x -= step;
        if (x <= lo || x >= hi) x = (x1 + x2) / 2;
        if (abs(step) <= tol * abs(x)) {
            Real mu = -pow(1 - x, a - 1) * (1 + (a - 1) * x) / x;
            return {mu, x};
        }
    }
    throw convergence_error("critical_mu: Newton did not converge");
}

// Mu where the real saddle and the complex pair contribute with equal
// modulus; the common |e^sigma| is the predicted per-order convergence
// factor. Requires a complex saddle pair to exist (true for alpha = 3).
struct BalancedPoint {
    Real mu;
    Real rate; // common |e^sigma|
};

inline BalancedPoint balanced_mu(const Rational& alpha) {
    auto gap = [&](const Real& mu) {
        auto pts = saddle_points(alpha, mu);
        const Real im_floor = pow10(-static_cast<long>(precision_digits()) + 24);
        Real re_sig;
        bool have_real = false, have_pair = false;
        Real pair_sig;
        for (const auto& l : pts) {
            if (abs(l.im) <= im_floor) {
                if (l.re < 0 && !have_real) {
                    re_sig = sigma(alpha, mu, Cplx(l.re)).re;
                    have_real = true;
                }
            } else if (l.im > 0 && !have_pair) {
                pair_sig = sigma(alpha, mu, l).re;
                have_pair = true;
            }
        }
        if (!have_real || !have_pair)
            throw convergence_error("balanced_mu: no complex saddle pair at mu=" + str(mu, 8));
        return re_sig - pair_sig;
    };

    Real mu_hi = critical_mu(alpha).mu_c;
    Real mu_lo(2);
    Real g_lo = gap(mu_lo), g_hi = gap(mu_hi);
    if ((g_lo < 0) == (g_hi < 0))
        throw convergence_error("balanced_mu: contributions never equalize on [2, mu_c]");
    for (int i = 0; i < precision_bits(); ++i) {
        Real mid = (mu_lo + mu_hi) / 2;
        if ((gap(mid) < 0) == (g_lo < 0)) {
            mu_lo = mid;
        } else {
            mu_hi = mid;
        }
        if (mu_hi - mu_lo <= abs(mu_hi) * pow10(-static_cast<long>(precision_digits()) + 8))
            break;
    }
    Real mu = (mu_lo + mu_hi) / 2;
    Real rate = exp(sigma(alpha, mu, Cplx(real_saddle(alpha, mu))).re);
    return {mu, rate};
}

// Per-order damping from the lambda^k factor at fixed argument g:
// |lambda^k| ~ exp(-coefficient k^(1-1/alpha)), coefficient = Re((R/g)^(1/alpha)).
struct LambdaFactor {
    Real coefficient;
    Real exponent; // coefficient * k^(1-1/alpha)
    Real factor;   // exp(-exponent)
};

inline LambdaFactor lambda_factor(const Cplx& g, const Real& R, const Rational& alpha,
                                  unsigned k) {
    if (abs(g) == 0) throw domain_error("lambda_factor: g must be nonzero");
    if (!(R > 0)) throw domain_error("lambda_factor: R must be positive");
    Real a = to_real(alpha);
    Real coeff = pow(Cplx(R) / g, 1 / a).re;
    Real expo = coeff * pow(Real(k), 1 - 1 / a);
    return {coeff, expo, exp(-expo)};
}

// Convergence domain on the Riemann surface of g, encoded by the constant C
// in the error law error ~ exp(-(Re((R/g)^(1/alpha)) - C) k^(1-1/alpha)).
// Points are passed as (modulus, theta) with theta unrestricted so sheets
// beyond the principal one are addressable.
struct ConvergenceDomain {
    Rational alpha;
    Real R;
    Real C;

    Real margin(const Real& modulus, const Real& theta) const {
        Real a = to_real(alpha);
        return pow(R / modulus, 1 / a) * cos(theta / a) - C;
    }

    bool contains(const Real& modulus, const Real& theta) const {
        if (!(modulus > 0)) throw domain_error("contains: modulus must be positive");
        return margin(modulus, theta) > 0;
    }

    // |g| on the domain boundary along the ray at angle theta. Rays on which
    // the domain is radially unbounded (or empty) have no boundary.
    Real boundary_radius(const Real& theta) const {
        Real a = to_real(alpha);
        Real ratio = cos(theta / a) / C;
        if (!(ratio > 0))
            throw domain_error("boundary_radius: no boundary along theta=" + str(theta, 8));
        return R * pow(ratio, a);
    }
};

inline ConvergenceDomain convergence_domain(const Rational& alpha, const Real& R, const Real& C) {
    if (alpha <= 1) throw domain_error("convergence_domain: alpha must exceed 1");
    if (!(R > 0)) throw domain_error("convergence_domain: R must be positive");
    if (C == 0) throw domain_error("convergence_domain: C must be nonzero");
    return {alpha, R, C};
}

} // namespace odm

#endif
