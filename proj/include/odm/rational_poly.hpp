/// @file rational_poly.hpp
/// @brief Dense univariate polynomials with exact rational coefficients.

#ifndef ODM_RATIONAL_POLY_HPP
#define ODM_RATIONAL_POLY_HPP

#include "complex.hpp"
#include "numeric.hpp"

#include <vector>

namespace odm {

// Coefficients in ascending order; empty vector is the zero polynomial.
using RatPoly = std::vector<Rational>;

inline void poly_trim(RatPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline long poly_degree(const RatPoly& p) {
    for (size_t i = p.size(); i-- > 0;)
        if (p[i] != 0) return static_cast<long>(i);
    return -1;
}

inline RatPoly poly_derivative(const RatPoly& p) {
    if (p.size() <= 1) return {};
    RatPoly d(p.size() - 1);
    for (size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * Rational(i);
    return d;
}

inline Rational poly_eval(const RatPoly& p, const Rational& x) {
    Rational r(0);
    for (size_t i = p.size(); i-- > 0;) r = r * x + p[i];
    return r;
}

inline Real poly_eval(const RatPoly& p, const Real& x) {
    Real r(0);
    for (size_t i = p.size(); i-- > 0;) r = r * x + to_real(p[i]);
    return r;
}

inline Cplx poly_eval(const RatPoly& p, const Cplx& x) {
    Cplx r(0);
    for (size_t i = p.size(); i-- > 0;) r = r * x + Cplx(to_real(p[i]));
    return r;
}

// Horner evaluation when the coefficients are already converted.
inline Cplx poly_eval(const std::vector<Cplx>& p, const Cplx& x) {
    Cplx r(0);
    for (size_t i = p.size(); i-- > 0;) r = r * x + p[i];
    return r;
}

inline std::vector<Cplx> poly_to_cplx(const RatPoly& p) {
    std::vector<Cplx> c;
    c.reserve(p.size());
    for (const auto& q : p) c.emplace_back(to_real(q));
    return c;
}

} // namespace odm

#endif
