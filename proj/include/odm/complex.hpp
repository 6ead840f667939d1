/// @file complex.hpp
/// @brief Complex arithmetic over the variable-precision Real type.
///
/// std::complex is not usable with a multiprecision backend and no MPC
/// wrapper is available, so the handful of operations needed here are
/// written out. All multivalued functions take principal branches.

#ifndef ODM_COMPLEX_HPP
#define ODM_COMPLEX_HPP

#include "numeric.hpp"

#include <ostream>
#include <string>

namespace odm {

struct Cplx {
    Real re, im;

    Cplx() : re(0), im(0) {}
    Cplx(const Real& r) : re(r), im(0) {}
    Cplx(const Real& r, const Real& i) : re(r), im(i) {}
    Cplx(int r) : re(r), im(0) {}
    Cplx(long r) : re(r), im(0) {}
    Cplx(double r) : re(r), im(0) {}
    explicit Cplx(const Rational& q) : re(to_real(q)), im(0) {}

    Cplx& operator+=(const Cplx& o) { re += o.re; im += o.im; return *this; }
    Cplx& operator-=(const Cplx& o) { re -= o.re; im -= o.im; return *this; }
    Cplx& operator*=(const Cplx& o) {
        Real r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = r;
        return *this;
    }
    Cplx& operator/=(const Cplx& o) {
        Real d = o.re * o.re + o.im * o.im;
        Real r = (re * o.re + im * o.im) / d;
        im = (im * o.re - re * o.im) / d;
        re = r;
        return *this;
    }
};

inline Cplx operator+(Cplx a, const Cplx& b) { return a += b; }
inline Cplx operator-(Cplx a, const Cplx& b) { return a -= b; }
inline Cplx operator*(Cplx a, const Cplx& b) { return a *= b; }
inline Cplx operator/(Cplx a, const Cplx& b) { return a /= b; }
inline Cplx operator-(const Cplx& a) { return Cplx(-a.re, -a.im); }
inline bool operator==(const Cplx& a, const Cplx& b) { return a.re == b.re && a.im == b.im; }
inline bool operator!=(const Cplx& a, const Cplx& b) { return !(a == b); }

inline Cplx conj(const Cplx& z) { return Cplx(z.re, -z.im); }
inline Real norm(const Cplx& z) { return z.re * z.re + z.im * z.im; }
inline Real abs(const Cplx& z) {
    using boost::multiprecision::hypot;
    return hypot(z.re, z.im);
}
inline Real arg(const Cplx& z) { return atan2(z.im, z.re); }

inline Cplx polar(const Real& r, const Real& theta) {
    return Cplx(r * cos(theta), r * sin(theta));
}

inline Cplx exp(const Cplx& z) {
    using boost::multiprecision::exp;
    return polar(exp(z.re), z.im);
}

inline Cplx log(const Cplx& z) {
    using boost::multiprecision::log;
    if (z.re == 0 && z.im == 0) throw domain_error("log of zero");
    return Cplx(log(abs(z)), arg(z));
}

inline Cplx sqrt(const Cplx& z) {
    using boost::multiprecision::sqrt;
    if (z.im == 0) {
        if (z.re >= 0) return Cplx(sqrt(z.re), Real(0));
        return Cplx(Real(0), sqrt(-z.re));
    }
    Real m = abs(z);
    if (z.re >= 0) {
        Real u = sqrt((m + z.re) / 2);
        return Cplx(u, z.im / (2 * u));
    }
    Real v = sqrt((m - z.re) / 2);
    if (z.im < 0) v = -v;
    return Cplx(z.im / (2 * v), v);
}

inline Cplx pow(const Cplx& z, const Real& s) {
    if (z.re == 0 && z.im == 0) {
        if (s > 0) return Cplx(Real(0));
        throw domain_error("0 raised to a non-positive power");
    }
    return exp(Cplx(s) * log(z));
}

inline Cplx pow(const Cplx& z, const Cplx& s) {
    if (z.re == 0 && z.im == 0) {
        if (s.im == 0 && s.re > 0) return Cplx(Real(0));
        throw domain_error("0 raised to a non-positive power");
    }
    return exp(s * log(z));
}

inline Cplx pow_int(Cplx z, long e) {
    if (e < 0) return Cplx(1) / pow_int(z, -e);
    Cplx r(1);
    while (e) {
        if (e & 1) r *= z;
        z *= z;
        e >>= 1;
    }
    return r;
}

inline std::string str(const Cplx& z, unsigned digits = 0) {
    std::string s = str(z.re, digits);
    if (z.im != 0) {
        std::string i = str(z.im, digits);
        if (!i.empty() && i[0] != '-') s += "+";
        s += i + "i";
    }
    return s;
}

inline std::ostream& operator<<(std::ostream& os, const Cplx& z) { return os << str(z); }

// Parses "a", "a+bi", "a-bi", "bi", or "p/q" (exact rational, converted at
// the ambient precision). Whitespace is not allowed.
inline Cplx parse_complex(const std::string& s) {
    if (s.empty()) throw domain_error("empty number");
    if (s.find('/') != std::string::npos) return Cplx(to_real(parse_rational(s)));

    auto parse_real_part = [](const std::string& t) -> Real {
        try {
            return Real(t);
        } catch (const std::exception&) {
            throw domain_error("cannot parse number from '" + t + "'");
        }
    };

    std::string body = s;
    bool has_i = body.back() == 'i' || body.back() == 'I';
    if (!has_i) return Cplx(parse_real_part(body));
    body.pop_back();

    // find the sign that splits real and imaginary parts (skip position 0 and
    // exponent signs like 1e-3)
    size_t split = std::string::npos;
    for (size_t p = body.size(); p-- > 1;) {
        char c = body[p];
        if ((c == '+' || c == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
            split = p;
            break;
        }
    }
    if (split == std::string::npos) {
        if (body.empty() || body == "+") return Cplx(Real(0), Real(1));
        if (body == "-") return Cplx(Real(0), Real(-1));
        return Cplx(Real(0), parse_real_part(body));
    }
    std::string rp = body.substr(0, split);
    std::string ip = body.substr(split);
    if (ip == "+") ip = "1";
    if (ip == "-") ip = "-1";
    return Cplx(parse_real_part(rp), parse_real_part(ip));
}

} // namespace odm

#endif
