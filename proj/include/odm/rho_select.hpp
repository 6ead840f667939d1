/// @file rho_select.hpp
/// @brief Selection and fitting of the mapping-parameter schedule rho_k.
///
/// Working variable throughout is the rescaled tau = k rho / A, which stays
/// O(1) as the order grows. Selection picks, per order, the zero of P'_k
/// (or of P_k) with the largest real part whose Re(tau) lies in a window
/// tracked from the previous order; conjugate pairs collapse to the
/// Im >= 0 member. A least-squares fit of k Re(rho_k)/A = mu - c k^(-e)
/// extrapolates the schedule to arbitrary order.

#ifndef ODM_RHO_SELECT_HPP
#define ODM_RHO_SELECT_HPP

#include "mapped_series.hpp"
#include "roots.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace odm {

enum class RhoCriterion { zero_of_p, zero_of_p_prime, mixed, fitted };

inline std::string to_string(RhoCriterion c) {
    switch (c) {
        case RhoCriterion::zero_of_p: return "zero-of-P";
        case RhoCriterion::zero_of_p_prime: return "zero-of-P'";
        case RhoCriterion::mixed: return "mixed";
        case RhoCriterion::fitted: return "fitted";
    }
    return "?";
}

inline RhoCriterion criterion_from_string(const std::string& s) {
    if (s == "zero-of-P") return RhoCriterion::zero_of_p;
    if (s == "zero-of-P'") return RhoCriterion::zero_of_p_prime;
    if (s == "mixed") return RhoCriterion::mixed;
    if (s == "fitted") return RhoCriterion::fitted;
    throw schema_error("unknown criterion tag: " + s);
}

struct TauWindow {
    Real lo, hi;
};

struct RhoEntry {
    unsigned k = 0;
    Cplx rho;
    RhoCriterion criterion = RhoCriterion::zero_of_p_prime;
    std::vector<Cplx> root_pool;
};

struct RhoFit {
    Real mu;
    Real c;
    Rational exponent; // correction decays like k^(-exponent)
};

struct RhoSchedule {
    std::string model;
    Rational A;
    std::vector<RhoEntry> entries;
    std::optional<RhoFit> fit;

    Cplx tau_of(const RhoEntry& e) const { return e.rho * Real(e.k) / to_real(A); }

    const RhoEntry* entry_at(unsigned k) const {
        for (const auto& e : entries)
            if (e.k == k) return &e;
        return nullptr;
    }

    // Tabulated value when present, otherwise the fitted extrapolation.
    Cplx rho_at(unsigned k) const {
        if (const auto* e = entry_at(k)) return e->rho;
        if (!fit)
            throw domain_error("rho_at: order " + std::to_string(k) +
                               " not tabulated and no fit available");
        Real kr(k);
        Real tau = fit->mu - fit->c * exp(-to_real(fit->exponent) * log(kr));
        return Cplx(to_real(A) * tau / kr);
    }
};

// Root of the selection polynomial with the largest real part whose Re(tau)
// falls inside the window. Conjugate pairs collapse to Im >= 0. Strategy
// `mixed` draws from the zeros of P'_k but first discards candidates where
// |P_k| exceeds twice the in-window minimum, so the selection sits where the
// polynomial and its derivative are small together.
inline RhoEntry select_rho(const MappedSeries& m, unsigned k, RhoCriterion strategy,
                           const TauWindow& window) {
    if (k < 1 || k > m.K) throw domain_error("select_rho: order out of range");
    if (strategy == RhoCriterion::fitted)
        throw domain_error("select_rho: fitted is not a selection strategy");
    RatPoly poly = m.at(k);
    if (strategy != RhoCriterion::zero_of_p) poly = poly_derivative(poly);

    RhoEntry entry;
    entry.k = k;
    entry.criterion = strategy;
    entry.root_pool = polynomial_roots(poly);

    const Real a = to_real(m.A);
    const Real re_tol = pow10(-static_cast<long>(precision_digits()) + 20);

    std::vector<const Cplx*> cand;
    for (const auto& r : entry.root_pool) {
        if (!(r.re > 0)) continue;
        Real tau_re = Real(k) * r.re / a;
        if (tau_re < window.lo || tau_re > window.hi) continue;
        cand.push_back(&r);
    }
    if (strategy == RhoCriterion::mixed && cand.size() > 1) {
        auto pc = poly_to_cplx(m.at(k));
        std::vector<Real> pmag;
        Real minp;
        for (size_t i = 0; i < cand.size(); ++i) {
            pmag.push_back(abs(poly_eval(pc, *cand[i])));
            if (i == 0 || pmag.back() < minp) minp = pmag.back();
        }
        std::vector<const Cplx*> keep;
        for (size_t i = 0; i < cand.size(); ++i)
            if (pmag[i] <= 2 * minp) keep.push_back(cand[i]);
        cand = keep;
    }

    bool found = false;
    for (const Cplx* rp : cand) {
        const Cplx& r = *rp;
        if (!found || r.re > entry.rho.re + re_tol ||
            (abs(r.re - entry.rho.re) <= re_tol && r.im > entry.rho.im)) {
            entry.rho = r;
            found = true;
        }
    }
    if (!found) {
        std::string msg = "select_rho: no root with Re(tau) in [" + str(window.lo, 6) + ", " +
                          str(window.hi, 6) + "] at k=" + std::to_string(k) + "; candidates:";
        for (const auto& r : entry.root_pool)
            msg += " tau=" + str(Real(k) * r.re / a, 6) + (r.im >= 0 ? "+" : "") +
                   str(Real(k) * r.im / a, 6) + "i";
        throw domain_error(msg);
    }
    return entry;
}

// Full schedule up to k_max. Order 1 uses the zero of P_1 itself; orders
// 2..4 search a wide window around the previous selection, and from order 5
// on the window tightens to +-20%.
inline RhoSchedule build_schedule(const MappedSeries& m, unsigned k_max,
                                  RhoCriterion strategy = RhoCriterion::mixed) {
    if (k_max < 1 || k_max > m.K) throw domain_error("build_schedule: order out of range");
    RhoSchedule sched;
    sched.model = m.model;
    sched.A = m.A;

    RhoEntry first = select_rho(m, 1, RhoCriterion::zero_of_p, {Real(0), Real("1e30")});
    sched.entries.push_back(first);
    Real tau_prev = sched.tau_of(first).re;

    for (unsigned k = 2; k <= k_max; ++k) {
        TauWindow w = k <= 4 ? TauWindow{tau_prev / 10, 2 * tau_prev}
                             : TauWindow{tau_prev * 4 / 5, tau_prev * 6 / 5};
        RhoEntry e = select_rho(m, k, strategy, w);
        tau_prev = sched.tau_of(e).re;
        sched.entries.push_back(e);
    }
    return sched;
}

struct ScanRow {
    Real tau;
    Real p;         // P_k at rho = A tau / k
    Real dp_scaled; // A P'_k / k, same units as d/dtau
};

// Real-tau profile of P_k and its scaled derivative on a uniform grid.
inline std::vector<ScanRow> scan_profile(const MappedSeries& m, unsigned k, const Real& tau_lo,
                                         const Real& tau_hi, unsigned samples) {
    if (k < 1 || k > m.K) throw domain_error("scan_profile: order out of range");
    if (samples < 2) throw domain_error("scan_profile: need at least 2 samples");
    RatPoly p = m.at(k);
    RatPoly dp = poly_derivative(p);
    Real a = to_real(m.A);
    std::vector<ScanRow> rows;
    rows.reserve(samples);
    for (unsigned i = 0; i < samples; ++i) {
        Real tau = tau_lo + (tau_hi - tau_lo) * Real(i) / Real(samples - 1);
        Real rho = a * tau / Real(k);
        rows.push_back({tau, poly_eval(p, rho), a * poly_eval(dp, rho) / Real(k)});
    }
    return rows;
}

enum class FitMode { free_mu, fixed_mu };

// Least squares for y_i = mu - c x_i with x_i = k_i^(-e). Returns (mu, c).
inline std::pair<Real, Real> fit_tau_sequence(const std::vector<Real>& ks,
                                              const std::vector<Real>& taus,
                                              const Rational& exponent, FitMode mode,
                                              const Real& mu_fixed = Real(0)) {
    if (ks.size() != taus.size() || ks.size() < 2)
        throw domain_error("fit_tau_sequence: need at least 2 matching points");
    const size_t n = ks.size();
    Real e = to_real(exponent);
    std::vector<Real> x(n);
    for (size_t i = 0; i < n; ++i) x[i] = exp(-e * log(ks[i]));

    bool degenerate = true;
    for (size_t i = 1; i < n; ++i)
        if (x[i] != x[0]) degenerate = false;
    if (degenerate) throw domain_error("fit_tau_sequence: all orders equal, fit is rank-deficient");

    if (mode == FitMode::fixed_mu) {
        Real num(0), den(0);
        for (size_t i = 0; i < n; ++i) {
            num += x[i] * (mu_fixed - taus[i]);
            den += x[i] * x[i];
        }
        return {mu_fixed, num / den};
    }
    Real sx(0), sy(0), sxx(0), sxy(0);
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += taus[i];
        sxx += x[i] * x[i];
        sxy += x[i] * taus[i];
    }
    Real nn(static_cast<unsigned>(n));
    Real det = nn * sxx - sx * sx;
    Real c = (sx * sy - nn * sxy) / det;
    Real mu = (sy + c * sx) / nn;
    return {mu, c};
}

inline Rational default_fit_exponent(const std::string& model) {
    return model == "ix3-qm" ? Rational(2, 5) : Rational(1);
}

// Fits Re(tau_k) over the tabulated entries and attaches the result, making
// rho_at() defined for every order. The single-correction form only sets in
// asymptotically, so entries below k_min are excluded; if that leaves fewer
// than three points the fit falls back to the top half of the table.
inline RhoSchedule fit_schedule(const RhoSchedule& sched, FitMode mode,
                                std::optional<Real> mu_c = std::nullopt,
                                std::optional<Rational> exponent = std::nullopt,
                                unsigned k_min = 10) {
    if (sched.entries.size() < 10) throw domain_error("fit_schedule: need at least 10 entries");
    if (mode == FitMode::fixed_mu && !mu_c)
        throw domain_error("fit_schedule: fixed-mu mode requires mu_c");
    Rational e = exponent ? *exponent : default_fit_exponent(sched.model);
    std::vector<Real> ks, taus;
    for (const auto& ent : sched.entries)
        if (ent.k >= k_min) {
            ks.emplace_back(ent.k);
            taus.push_back(sched.tau_of(ent).re);
        }
    if (ks.size() < 3) {
        ks.clear();
        taus.clear();
        for (size_t i = sched.entries.size() / 2; i < sched.entries.size(); ++i) {
            ks.emplace_back(sched.entries[i].k);
            taus.push_back(sched.tau_of(sched.entries[i]).re);
        }
    }
    auto [mu, c] = fit_tau_sequence(ks, taus, e, mode, mu_c ? *mu_c : Real(0));
    RhoSchedule out = sched;
    out.fit = RhoFit{mu, c, e};
    return out;
}

// Pairwise means of consecutive values; damps odd/even oscillation.
template <typename T>
std::vector<T> odd_even_average(const std::vector<T>& seq) {
    if (seq.size() < 2) throw domain_error("odd_even_average: need at least 2 values");
    std::vector<T> out;
    out.reserve(seq.size() - 1);
    for (size_t i = 1; i < seq.size(); ++i) out.push_back((seq[i - 1] + seq[i]) / Real(2));
    return out;
}

// --- persistence ---------------------------------------------------------

inline nlohmann::json schedule_to_json(const RhoSchedule& s) {
    nlohmann::json j;
    j["model"] = s.model;
    j["A"] = {numerator(s.A).str(), denominator(s.A).str()};
    j["entries"] = nlohmann::json::array();
    unsigned digits = precision_digits();
    for (const auto& e : s.entries) {
        nlohmann::json je;
        je["k"] = e.k;
        je["rho"] = {str(e.rho.re, digits), str(e.rho.im, digits)};
        je["criterion"] = to_string(e.criterion);
        auto pool = nlohmann::json::array();
        for (const auto& r : e.root_pool) pool.push_back({str(r.re, digits), str(r.im, digits)});
        je["root_pool"] = pool;
        j["entries"].push_back(je);
    }
    if (s.fit) {
        j["fit"] = {{"mu", str(s.fit->mu, digits)},
                    {"c", str(s.fit->c, digits)},
                    {"exponent", {numerator(s.fit->exponent).str(), denominator(s.fit->exponent).str()}}};
    }
    return j;
}

inline RhoSchedule schedule_from_json(const nlohmann::json& j) {
    RhoSchedule s;
    try {
        s.model = j.at("model").get<std::string>();
        s.A = Rational(Integer(j.at("A").at(0).get<std::string>()),
                       Integer(j.at("A").at(1).get<std::string>()));
        for (const auto& je : j.at("entries")) {
            RhoEntry e;
            e.k = je.at("k").get<unsigned>();
            e.rho = Cplx(Real(je.at("rho").at(0).get<std::string>()),
                         Real(je.at("rho").at(1).get<std::string>()));
            e.criterion = criterion_from_string(je.at("criterion").get<std::string>());
            for (const auto& jr : je.at("root_pool"))
                e.root_pool.emplace_back(Real(jr.at(0).get<std::string>()),
                                         Real(jr.at(1).get<std::string>()));
            s.entries.push_back(std::move(e));
        }
        if (j.contains("fit")) {
            RhoFit f;
            f.mu = Real(j.at("fit").at("mu").get<std::string>());
            f.c = Real(j.at("fit").at("c").get<std::string>());
            f.exponent = Rational(Integer(j.at("fit").at("exponent").at(0).get<std::string>()),
                                  Integer(j.at("fit").at("exponent").at(1).get<std::string>()));
            s.fit = f;
        }
    } catch (const nlohmann::json::exception& ex) {
        throw schema_error(std::string("schedule: ") + ex.what());
    }
    return s;
}

inline void save_schedule(const RhoSchedule& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw resource_error("cannot open for writing: " + path);
    out << schedule_to_json(s).dump(1) << '\n';
}

inline RhoSchedule load_schedule(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw resource_error("cannot open: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& ex) {
        throw schema_error(std::string("schedule: ") + ex.what());
    }
    return schedule_from_json(j);
}

} // namespace odm

#endif
