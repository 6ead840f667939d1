/// @file mapping.hpp
/// @brief The order-dependent conformal map g = rho lambda (1-lambda)^{-alpha}
///        and its branch-tracked inverse.
///
/// The map has a fold at lambda* = -1/(alpha-1) where g'(lambda) = 0; its
/// image g* = g(lambda*) is a branch point of lambda(g). For arguments past
/// the fold on the ray from 0 through g* the inverse is double valued and the
/// caller must say which side of the cut is meant: Side::above keeps
/// Im(lambda) >= 0, Side::below the conjugate.

#ifndef ODM_MAPPING_HPP
#define ODM_MAPPING_HPP

#include "complex.hpp"
#include "numeric.hpp"

namespace odm {

enum class Side { automatic, above, below };

inline Cplx map_g(const Cplx& rho, const Cplx& lambda, const Rational& alpha) {
    if (lambda == Cplx(1)) throw domain_error("map_g: lambda = 1 is outside the map domain");
    return rho * lambda * pow(Cplx(1) - lambda, -to_real(alpha));
}

namespace detail {

inline Cplx map_dg(const Cplx& rho, const Cplx& lambda, const Real& alpha) {
    return rho * pow(Cplx(1) - lambda, -alpha - 1) * (Cplx(1) + (alpha - 1) * lambda);
}

// Newton iterations toward map_g(lambda) = target from a given start.
// Returns true on success.
inline bool newton_to_target(const Cplx& rho, const Real& alpha, const Cplx& target,
                             Cplx& lambda, const Real& rel_tol, int iters = 60) {
    Real scale = abs(target) + abs(rho);
    for (int i = 0; i < iters; ++i) {
        Cplx one_m = Cplx(1) - lambda;
        if (abs(one_m) == 0) return false;
        Cplx f = rho * lambda * pow(one_m, -alpha) - target;
        if (abs(f) <= rel_tol * scale) return true;
        Cplx df = map_dg(rho, lambda, alpha);
        if (abs(df) == 0) return false;
        Cplx step = f / df;
        lambda -= step;
        if (abs(lambda) > 4) return false;
    }
    Cplx f = rho * lambda * pow(Cplx(1) - lambda, -alpha) - target;
    return abs(f) <= rel_tol * scale;
}

} // namespace detail

// Inverse of map_g on the branch connected to lambda(0) = 0, following the
// straight ray from 0 to g. When the ray passes the fold image g* the branch
// is chosen by `side`; with Side::automatic a genuinely ambiguous g (exactly
// on the cut past the fold) raises a domain error, while arguments off the
// cut resolve themselves by continuity.
inline Cplx invert_map(const Cplx& g, const Cplx& rho, const Rational& alpha,
                       Side side = Side::automatic) {
    if (alpha <= 1) throw domain_error("invert_map: alpha must exceed 1");
    if (abs(rho) == 0) throw domain_error("invert_map: rho must be nonzero");
    if (abs(g) == 0) return Cplx(0);

    // the lower side is the Schwarz reflection of the upper one
    if (side == Side::below)
        return conj(invert_map(conj(g), conj(rho), alpha, Side::above));

    const Real a = to_real(alpha);
    const Real rel_tol = pow10(-static_cast<long>(precision_digits()) + 3);

    // real rho > 0, real g > 0: g(lambda) is strictly increasing on (0, 1),
    // so the principal preimage comes from bracketing instead of continuation
    if (g.im == 0 && rho.im == 0 && g.re > 0 && rho.re > 0) {
        Real lo(0), hi(Real(1) / 2);
        for (int i = 0; i < 4 * static_cast<int>(precision_bits()); ++i) {
            Cplx gv = map_g(rho, Cplx(hi), alpha);
            if (gv.re >= g.re) break;
            lo = hi;
            hi = (hi + 1) / 2;
        }
        for (int i = 0; i < 80; ++i) {
            Real mid = (lo + hi) / 2;
            if (mid == lo || mid == hi) break;
            Cplx gv = map_g(rho, Cplx(mid), alpha);
            (gv.re < g.re ? lo : hi) = mid;
        }
        Cplx lam((lo + hi) / 2);
        if (!detail::newton_to_target(rho, a, g, lam, rel_tol) || lam.im != 0 ||
            !(lam.re > 0 && lam.re < 1))
            throw convergence_error("invert_map: real-branch polish failed");
        return lam;
    }

    // fold parameters
    const Cplx lam_star = Cplx(-1) / (a - 1);
    const Cplx g_star = rho * lam_star * pow(Cplx(1) - lam_star, -a);
    const Cplx ddg = rho * (a - 1) * pow(Cplx(1) - lam_star, -a - 1); // g''(lambda*)

    // Does the ray s*g (s in (0,1]) pass close to the branch point g*?
    // s_c is the parameter of nearest approach. Near the fold the two
    // preimages differ by the sign of Im(lambda - lambda*); the branch
    // continuous along the ray is fixed by the sign of Im(g/g*), since
    // 2 g*/g''(lambda*) = -2 alpha/(alpha-1)^3 is real and negative.
    const Cplx u = g / g_star;
    const Real s_c = u.re / norm(u);
    const Real d_min = (s_c > 0 && s_c < 1) ? Real(abs(u * s_c - Cplx(1)) * abs(g_star))
                                            : Real(abs(g_star));
    const bool fold_mode = s_c > 0 && s_c < 1 && d_min <= abs(g_star) / 10;
    bool side_up = true;
    if (fold_mode) {
        if (u.im == 0) {
            if (side == Side::automatic)
                throw domain_error("invert_map: g lies on the branch cut; pass side above or below");
            side_up = (side == Side::above);
        } else {
            side_up = (u.im < 0);
        }
    }

    Cplx lambda(0);
    Real s(0), h = Real(1) / 8;
    const Real h_min = pow10(-10);
    bool jumped = false;

    while (s < 1) {
        if (h > 1 - s) h = 1 - s;

        // step over the fold with the local quadratic model when the target
        // would otherwise have to squeeze past the branch point
        if (fold_mode && !jumped && s + h > s_c * Real(9) / 10) {
            Real s_resume = s_c * Real(11) / 10;
            if (s_resume >= 1) s_resume = (s_c + 1) / 2;
            Cplx target = g * s_resume;
            Cplx dl = sqrt((target - g_star) * 2 / ddg);
            Cplx cand = (dl.im >= 0) == side_up ? lam_star + dl : lam_star - dl;
            Cplx trial = cand;
            if (!detail::newton_to_target(rho, a, target, trial, rel_tol))
                throw convergence_error("invert_map: failed to re-converge after the fold");
            if (trial.im != 0 && (trial.im > 0) != side_up)
                throw convergence_error("invert_map: fold crossing landed on the wrong side");
            lambda = trial;
            s = s_resume;
            jumped = true;
            continue;
        }

        // Euler predictor, Newton corrector. Seeding at the prediction keeps
        // Newton local, and a correction that is not small against the
        // predicted increment marks a hop onto another preimage: those stay
        // O(1) long no matter how small h gets, so halving h separates them.
        Cplx dgc = detail::map_dg(rho, lambda, a);
        if (abs(dgc) > 0) {
            Cplx pred = g * h / dgc;
            // preimages of the same g sit a finite distance apart away from
            // the fold; keeping increments well below that spacing makes the
            // corrector unambiguous
            if (abs(pred) > Real(3) / 20) {
                h /= 2;
                if (h < h_min)
                    throw convergence_error("invert_map: continuation failed (step underflow)");
                continue;
            }
            Cplx trial = lambda + pred;
            if (detail::newton_to_target(rho, a, g * (s + h), trial, rel_tol) &&
                abs(trial - lambda - pred) <= abs(pred) / 2) {
                lambda = trial;
                s += h;
                h *= Real(13) / 10;
                if (h > Real(1) / 4) h = Real(1) / 4;
                continue;
            }
        }
        h /= 2;
        if (h < h_min)
            throw convergence_error("invert_map: continuation failed (step underflow)");
    }

    // final certification: polynomial cross-check (rho lambda)^q = g^q (1-lambda)^p
    const long p = static_cast<long>(numerator(alpha).convert_to<long>());
    const long q = static_cast<long>(denominator(alpha).convert_to<long>());
    Cplx lhs = pow_int(rho * lambda, q);
    Cplx rhs = pow_int(g, q) * pow_int(Cplx(1) - lambda, p);
    Real mag = abs(lhs) + abs(rhs);
    if (mag > 0 && abs(lhs - rhs) > pow10(-static_cast<long>(precision_digits()) + 8) * mag)
        throw convergence_error("invert_map: polynomial residual check failed");

    if (fold_mode && u.im == 0 && side == Side::above && lambda.im < 0)
        throw convergence_error("invert_map: requested side not attained");
    return lambda;
}

} // namespace odm

#endif
