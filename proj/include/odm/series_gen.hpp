/// @file series_gen.hpp
/// @brief Exact perturbative coefficients for the two model problems, plus
///        large-order growth diagnostics.
///
/// Model "ix3-integral": Z(g) = (2 pi)^{-1/2} Int exp(-x^2/2 - i sqrt(g) x^3 / 6) dx,
///   Z(g) = sum_m E_m g^m with E_m rational, alternating, factorially divergent.
/// Model "ix3-qm": ground (or excited) state energy of
///   H = p^2/2 + x^2/2 + i sqrt(g)/6 x^3, E(g) = sum_m E_m g^m.
///
/// The oscillator coefficients come from the wavefunction recursion: writing
/// psi = exp(-x^2/2) Phi(x), Phi = sum_k eta^k B_k(x) with eta = i sqrt(g)/6,
/// each order solves (L - n) B_k = -x^3 B_{k-1} + sum_j eps_j B_{k-j} where
/// L = -d^2/2 + x d. Solvability at the x^n coefficient fixes eps_k.

#ifndef ODM_SERIES_GEN_HPP
#define ODM_SERIES_GEN_HPP

#include "numeric.hpp"
#include "power_series.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace odm {

inline PowerSeries gen_ix3_integral_series(unsigned K) {
    PowerSeries s;
    s.model = "ix3-integral";
    s.alpha = 3;
    s.beta = Rational(-1, 6);
    s.A = Rational(2, 3);
    s.b = Rational(-1);
    s.coeffs.resize(K + 1);
    s.coeffs[0] = 1;
    // E_m / E_{m-1} = -(6m-1)(6m-3)(6m-5) / (72 m (2m-1))
    for (unsigned long m = 1; m <= K; ++m) {
        Rational num(-(6 * static_cast<long>(m) - 1));
        num *= (6 * static_cast<long>(m) - 3);
        num *= (6 * static_cast<long>(m) - 5);
        s.coeffs[m] = s.coeffs[m - 1] * num / Rational(72 * static_cast<long>(m) * (2 * static_cast<long>(m) - 1));
    }
    return s;
}

namespace detail {

// physicists' Hermite polynomial H_n, ascending coefficients
inline std::vector<Rational> hermite(unsigned n) {
    std::vector<Rational> hm{Rational(1)}, h{Rational(0), Rational(2)};
    if (n == 0) return hm;
    for (unsigned m = 1; m < n; ++m) {
        std::vector<Rational> next(m + 2, Rational(0));
        for (size_t i = 0; i < h.size(); ++i) next[i + 1] += 2 * h[i];
        for (size_t i = 0; i < hm.size(); ++i) next[i] -= 2 * Rational(m) * hm[i];
        hm = std::move(h);
        h = std::move(next);
    }
    return h;
}

// eps_1..eps_J of E(eta) = n + 1/2 + sum_k eps_k eta^k for
// H = p^2/2 + x^2/2 + eta x^3 at level n.
inline std::vector<Rational> cubic_energy_eta_orders(unsigned J, unsigned n) {
    std::vector<std::vector<Rational>> B(J + 1);
    B[0] = hermite(n);
    const Rational B0n = B[0][n]; // leading coefficient 2^n
    std::vector<Rational> eps(J + 1, Rational(0));

    for (unsigned k = 1; k <= J; ++k) {
        const size_t pmax = 3 * k + n;
        std::vector<Rational> r(pmax + 1, Rational(0));
        // -x^3 B_{k-1}
        for (size_t p = 0; p < B[k - 1].size(); ++p)
            if (B[k - 1][p] != 0) r[p + 3] -= B[k - 1][p];
        // + sum_{j<k} eps_j B_{k-j}
        for (unsigned j = 2; j < k; j += 2) {
            if (eps[j] == 0) continue;
            const auto& Bkj = B[k - j];
            for (size_t p = 0; p < Bkj.size(); ++p)
                if (Bkj[p] != 0) r[p] += eps[j] * Bkj[p];
        }

        std::vector<Rational> b(pmax + 3, Rational(0));
        auto up2 = [&](size_t p) { return b[p + 2] * Rational((p + 2) * (p + 1)) / 2; };
        for (size_t p = pmax; p > n; --p)
            b[p] = (r[p] + up2(p)) / Rational(static_cast<long>(p) - static_cast<long>(n));
        eps[k] = -(r[n] + up2(n)) / B0n;
        b[n] = 0;
        for (size_t p = n; p-- > 0;) {
            Rational rp = r[p] + eps[k] * B[0][p];
            b[p] = (rp + up2(p)) / Rational(static_cast<long>(p) - static_cast<long>(n));
        }
        b.resize(pmax + 1);
        B[k] = std::move(b);
    }
    eps.erase(eps.begin());
    return eps;
}

} // namespace detail

inline PowerSeries gen_ix3_energy_series(unsigned K, unsigned level = 0, unsigned budget = 200) {
    if (K > budget)
        throw resource_error("energy series order " + std::to_string(K) +
                             " exceeds budget " + std::to_string(budget));
    PowerSeries s;
    s.model = "ix3-qm";
    s.alpha = Rational(5, 2);
    s.beta = Rational(1, 5);
    s.A = Rational(24, 5);
    s.b = Rational(-1, 2);
    s.coeffs.resize(K + 1);
    s.coeffs[0] = Rational(2 * static_cast<long>(level) + 1, 2);
    if (K == 0) return s;

    auto eps = detail::cubic_energy_eta_orders(2 * K, level);
    // eta^2 = -g/36: odd eta-orders must vanish identically
    for (unsigned j = 1; j <= 2 * K; j += 2)
        if (eps[j - 1] != 0) throw convergence_error("odd-order energy correction nonzero");
    Rational pw(1);
    for (unsigned m = 1; m <= K; ++m) {
        pw /= -36;
        s.coeffs[m] = eps[2 * m - 1] * pw;
    }
    return s;
}

// ---- large-order diagnostics ------------------------------------------------

struct LargeOrderReport {
    // r_k = -A E_{k+1} / ((k + b + 1) E_k), expected -> 1
    std::vector<std::pair<unsigned, Real>> ratios;
    Real b_fit{0};            // intercept of -A E_{k+1}/E_k - k - 1 against 1/k
    std::optional<Rational> b_snapped; // nearest half-integer when close
    Real max_tail_dev{0};     // max |r_k - 1| over the top quarter of the window
};

inline LargeOrderReport large_order_check(const PowerSeries& s, unsigned k_lo, unsigned k_hi) {
    if (k_hi + 1 > s.order() || k_lo >= k_hi)
        throw domain_error("large_order_check: window must satisfy k_lo < k_hi <= K-1");
    Real A = to_real(s.A);
    Rational b_eff = s.b.value_or(Rational(0));
    LargeOrderReport rep;

    // LS fit of y_k = -A E_{k+1}/E_k - k - 1 = b + c/k
    Real sx(0), sy(0), sxx(0), sxy(0);
    unsigned npts = 0;
    for (unsigned k = k_lo; k <= k_hi; ++k) {
        if (s.coeffs[k] == 0)
            throw domain_error("large_order_check: zero coefficient at k=" + std::to_string(k));
        Real ratio_raw = -A * to_real(s.coeffs[k + 1] / s.coeffs[k]);
        Real rk = ratio_raw / (Real(k) + to_real(b_eff) + 1);
        rep.ratios.emplace_back(k, rk);
        Real y = ratio_raw - Real(k) - 1;
        Real x = Real(1) / k;
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++npts;
    }
    Real det = Real(npts) * sxx - sx * sx;
    if (det == 0) throw domain_error("large_order_check: degenerate window");
    rep.b_fit = (sy * sxx - sx * sxy) / det;

    Real twice = floor(rep.b_fit * 2 + Real(1) / 2);
    if (abs(rep.b_fit * 2 - twice) < Real(3) / 10)
        rep.b_snapped = Rational(twice.convert_to<long>(), 2);

    unsigned tail_start = k_hi - (k_hi - k_lo) / 4;
    for (auto& [k, r] : rep.ratios)
        if (k >= tail_start) rep.max_tail_dev = std::max(rep.max_tail_dev, Real(abs(r - 1)));
    return rep;
}

} // namespace odm

#endif
