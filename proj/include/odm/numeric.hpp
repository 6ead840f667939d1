/// @file numeric.hpp
/// @brief Exact rationals, variable-precision reals, precision control, errors.

#ifndef ODM_NUMERIC_HPP
#define ODM_NUMERIC_HPP

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace odm {

using Rational = boost::multiprecision::mpq_rational;
using Integer  = boost::multiprecision::mpz_int;
// Variable-precision real; working precision is the ambient MPFR default.
// Expression templates are off so Real composes with the Cplx wrapper.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                            boost::multiprecision::et_off>;

// ---- error hierarchy ------------------------------------------------------

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// bad arguments / values outside an operation's domain
struct domain_error : error {
    using error::error;
};
// iteration failed to converge, certification failed, a sought feature is absent
struct convergence_error : error {
    using error::error;
};
// malformed persisted data
struct schema_error : error {
    using error::error;
};
// configured size/order budget exceeded
struct resource_error : error {
    using error::error;
};

// ---- precision control ----------------------------------------------------

inline unsigned default_precision_bits() {
    if (const char* env = std::getenv("ODM_PREC_BITS")) {
        long v = std::atol(env);
        if (v >= 64 && v <= 1 << 20) return static_cast<unsigned>(v);
    }
    return 512;
}

inline unsigned bits_to_digits(unsigned bits) {
    return static_cast<unsigned>(bits * 0.3010299956639812);
}

inline void set_precision_bits(unsigned bits) {
    Real::default_precision(bits_to_digits(bits));
}

inline unsigned precision_bits() {
    return static_cast<unsigned>(Real::default_precision() / 0.3010299956639812) + 1;
}

inline unsigned precision_digits() { return Real::default_precision(); }

// RAII bump/restore of the ambient working precision (decimal digits inside MPFR).
class PrecisionGuard {
    unsigned saved_;

  public:
    explicit PrecisionGuard(unsigned bits) : saved_(Real::default_precision()) {
        Real::default_precision(bits_to_digits(bits));
    }
    ~PrecisionGuard() { Real::default_precision(saved_); }
    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;
};

// ---- conversions and parsing ----------------------------------------------

inline Real to_real(const Rational& q) { return q.convert_to<Real>(); }

inline Real to_real(long n) { return Real(n); }

// Accepts "p/q" or a plain integer string.
inline Rational parse_rational(const std::string& s) {
    try {
        return Rational(s);
    } catch (const std::exception&) {
        throw domain_error("cannot parse rational from '" + s + "'");
    }
}

// Decimal digits that are meaningful at the ambient precision, minus a guard band.
inline unsigned print_digits() {
    unsigned d = precision_digits();
    return d > 10 ? d - 5 : d;
}

inline std::string str(const Real& x, unsigned digits = 0) {
    if (digits == 0) digits = print_digits();
    return x.str(digits);
}

// 10^-e at ambient precision
inline Real pow10(long e) { return pow(Real(10), e); }

inline Real pi_const() { return 4 * atan(Real(1)); }

// ---- small exact helpers ---------------------------------------------------

inline Rational rational_pow(Rational base, long e) {
    if (e < 0) { base = 1 / base; e = -e; }
    Rational r(1), b(base);
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

// Generalized binomial coefficient binom(s, k) for rational s, integer k >= 0.
inline Rational binomial(const Rational& s, unsigned long k) {
    Rational r(1);
    for (unsigned long j = 0; j < k; ++j) {
        r *= (s - Rational(j));
        r /= Rational(j + 1);
    }
    return r;
}

inline Rational factorial(unsigned long n) {
    Rational r(1);
    for (unsigned long j = 2; j <= n; ++j) r *= Rational(j);
    return r;
}

} // namespace odm

#endif
