/// @file series_oracles.hpp
/// @brief Independent re-derivations of the model series, used only by tests.
///
/// Each generator here reaches the same coefficients as the production code
/// through a different piece of theory, so agreement is a real check:
///  - integral: termwise Gaussian-moment expansion, and separately the
///    Pochhammer product form E_m = (1/6)_m (5/6)_m (-3/2)^m / m!;
///  - oscillator: hypervirial relations plus the Hellmann-Feynman theorem
///    (moment table C_{N,j}, no wavefunction involved).

#ifndef ODM_TESTS_SERIES_ORACLES_HPP
#define ODM_TESTS_SERIES_ORACLES_HPP

#include <odm/numeric.hpp>

#include <algorithm>
#include <vector>

namespace odm::testing {

// E_m of the counting integral via <x^{6m}> = (6m-1)!! and the double sum
// exp(-i sqrt(g) x^3/6) -> sum_j (-i sqrt(g)/6)^j <x^{3j}> / j!.
inline std::vector<Rational> integral_series_moments(unsigned K) {
    std::vector<Rational> E(K + 1);
    Rational dfact(1); // (6m-1)!!
    Rational fact(1);  // (2m)!
    Rational pw(1);    // 36^m
    E[0] = 1;
    for (unsigned long m = 1; m <= K; ++m) {
        for (unsigned long s = 6 * m - 5; s <= 6 * m - 1; s += 2) dfact *= Rational(s);
        fact *= Rational(2 * m - 1) * Rational(2 * m);
        pw *= 36;
        E[m] = ((m % 2) ? -1 : 1) * dfact / (pw * fact);
    }
    return E;
}

// Same coefficients as a 2F0-type Pochhammer product.
inline std::vector<Rational> integral_series_pochhammer(unsigned K) {
    std::vector<Rational> E(K + 1);
    E[0] = 1;
    Rational term(1);
    for (unsigned long m = 1; m <= K; ++m) {
        term *= (Rational(1, 6) + Rational(m - 1)) * (Rational(5, 6) + Rational(m - 1));
        term *= Rational(-3, 2);
        term /= Rational(m);
        E[m] = term;
    }
    return E;
}

// Oscillator energy coefficients at a given level from the hypervirial
// (Swenson-Danforth) scheme for H = p^2/2 + x^2/2 + eta x^3:
//   2N E <x^{N-1}> = (N+1)<x^{N+1}> + (2N+3) eta <x^{N+2}>
//                    - N(N-1)(N-2)/4 <x^{N-3}>,
//   dE/deta = <x^3>   (Hellmann-Feynman).
// C[N][j] is the eta^j coefficient of <x^N> with <1> = 1 fixed.
inline std::vector<Rational> energy_series_hypervirial(unsigned K, unsigned level = 0) {
    std::vector<Rational> E(K + 1);
    E[0] = Rational(2 * static_cast<long>(level) + 1, 2);
    if (K == 0) return E;

    const unsigned J = 2 * K;                 // eta orders needed
    const size_t Mtop = 2 * J + 3;            // highest moment touched
    std::vector<Rational> eps(J + 1, Rational(0));
    eps[0] = E[0];

    std::vector<std::vector<Rational>> C(Mtop + 2);
    for (auto& row : C) row.assign(J, Rational(0));
    C[0][0] = 1; // normalization <1> = 1 at every order

    for (unsigned j = 0; j < J; ++j) {
        const size_t limit = std::min<size_t>(2 * (J - j) + 3, Mtop);
        // N = 0 relation: 0 = C_{1,j} + 3 C_{2,j-1}
        C[1][j] = (j == 0) ? Rational(0) : -3 * C[2][j - 1];
        for (size_t N = 1; N + 1 <= limit; ++N) {
            const long Nl = static_cast<long>(N);
            Rational acc(0);
            for (unsigned i = 0; i <= j; ++i) {
                if (eps[i] == 0 || C[N - 1][j - i] == 0) continue;
                acc += eps[i] * C[N - 1][j - i];
            }
            acc *= 2 * Rational(Nl);
            if (N >= 3 && C[N - 3][j] != 0)
                acc += Rational(Nl * (Nl - 1) * (Nl - 2), 4) * C[N - 3][j];
            if (j > 0 && C[N + 2][j - 1] != 0)
                acc -= Rational(2 * Nl + 3) * C[N + 2][j - 1];
            C[N + 1][j] = acc / Rational(Nl + 1);
        }
        eps[j + 1] = C[3][j] / Rational(j + 1);
    }

    for (unsigned m = 1; m <= K; ++m)
        if (eps[2 * m - 1] != 0) throw convergence_error("odd eta order nonzero in hypervirial scheme");
    Rational pw(1);
    for (unsigned m = 1; m <= K; ++m) {
        pw /= -36;
        E[m] = eps[2 * m] * pw;
    }
    return E;
}

} // namespace odm::testing

#endif
