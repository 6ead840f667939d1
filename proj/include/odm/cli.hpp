/// @file cli.hpp
/// @brief Command-line front end: subcommand parsing, orchestration, reports.
///
/// Subcommands map onto the library's operations one-to-one: `series` prints
/// exact input coefficients, `sum` evaluates approximants on a g-grid,
/// `strong` the strong-coupling estimates on a k-grid, `scan-rho` the
/// P_k/P'_k profile, `saddle` the critical constants, `fit-rho` the schedule
/// fit, `compare` ODM-vs-oracle tables, and `report` a reproduction bundle.
/// Output formats: plain text (default), RFC-4180-style CSV (CRLF, header
/// row), or JSON matching the schemas shipped under schemas/.
///
/// Exit codes: 0 success, 2 usage error, 3 numerical failure.

#ifndef ODM_CLI_HPP
#define ODM_CLI_HPP

#include "approximant.hpp"
#include "oracles.hpp"
#include "rho_select.hpp"
#include "saddle.hpp"
#include "series_gen.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace odm::cli {

using ordered_json = nlohmann::ordered_json;

/// Bad flag values and inconsistent configs; reported with exit code 2.
struct usage_error : std::runtime_error {
    explicit usage_error(const std::string& what) : std::runtime_error(what) {}
};

// ---- run configuration ---------------------------------------------------

struct RunConfig {
    std::string model = "ix3-integral";
    unsigned order = 10;
    unsigned precision = 512; // bits
    std::string strategy = "mixed";
    std::string window;          // "LO:HI" in tau units; empty = tracked
    std::string schedule = "auto"; // auto | fitted | file
    std::string schedule_file;
    std::vector<std::string> g_list; // parsed under the run precision
    std::string format = "text";     // text | csv | json
    std::string output;              // file (or directory for `report`)
    std::string side = "auto";       // auto | above | below
};

// ---- small parsers -------------------------------------------------------

namespace detail {

inline const std::regex& decimal_re() {
    static const std::regex re(R"(^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$)");
    return re;
}

inline Real parse_decimal(const std::string& s, const std::string& what) {
    if (!std::regex_match(s, decimal_re()))
        throw usage_error(what + ": expected a decimal number, got '" + s + "'");
    return Real(s);
}

inline bool split_rational(const std::string& s, std::string& num, std::string& den) {
    static const std::regex re(R"(^([+-]?\d+)/(\d+)$)");
    std::smatch m;
    if (!std::regex_match(s, m, re)) return false;
    num = m[1];
    den = m[2];
    return true;
}

} // namespace detail

/// Accepts decimal ("0.25", "-21.6", "1e-3"), exact rational ("288/49"), or
/// complex ("a+bi", "a-bi", "bi") with decimal parts.
inline Cplx parse_g(const std::string& text) {
    std::string s = text;
    s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
    if (s.empty()) throw usage_error("g: empty value");

    std::string num, den;
    if (detail::split_rational(s, num, den)) {
        Integer q(den);
        if (q == 0) throw usage_error("g: zero denominator in '" + text + "'");
        return Cplx(to_real(Rational(Integer(num), q)));
    }
    if (s.back() == 'i') {
        std::string body = s.substr(0, s.size() - 1);
        // split re/im at the last sign that is not an exponent sign
        for (size_t i = body.size(); i-- > 1;) {
            if ((body[i] == '+' || body[i] == '-') &&
                body[i - 1] != 'e' && body[i - 1] != 'E') {
                std::string re = body.substr(0, i);
                std::string im = body.substr(i);
                if (im == "+" || im == "-") im += "1";
                return Cplx(detail::parse_decimal(re, "g (real part)"),
                            detail::parse_decimal(im, "g (imaginary part)"));
            }
        }
        if (body.empty() || body == "+" || body == "-") body += "1";
        return Cplx(Real(0), detail::parse_decimal(body, "g (imaginary part)"));
    }
    return Cplx(detail::parse_decimal(s, "g"));
}

/// Alpha as "p/q", an integer, or a plain decimal ("2.5" -> 5/2).
inline Rational parse_alpha(const std::string& text) {
    std::string num, den;
    if (detail::split_rational(text, num, den)) {
        Integer q(den);
        if (q == 0) throw usage_error("alpha: zero denominator");
        return Rational(Integer(num), q);
    }
    static const std::regex dec(R"(^([+-]?\d+)(?:\.(\d+))?$)");
    std::smatch m;
    if (!std::regex_match(text, m, dec))
        throw usage_error("alpha: expected p/q, an integer, or a decimal, got '" + text + "'");
    Integer n(m[1].str() + m[2].str());
    Integer d(1);
    for (size_t i = 0; i < m[2].str().size(); ++i) d *= 10;
    return Rational(n, d);
}

inline Rational parse_rational(const std::string& text, const std::string& what) {
    std::string num, den;
    if (detail::split_rational(text, num, den)) {
        Integer q(den);
        if (q == 0) throw usage_error(what + ": zero denominator");
        return Rational(Integer(num), q);
    }
    static const std::regex intre(R"(^[+-]?\d+$)");
    if (std::regex_match(text, intre)) return Rational(Integer(text));
    throw usage_error(what + ": expected p/q or an integer, got '" + text + "'");
}

inline TauWindow parse_window(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == text.size())
        throw usage_error("window: expected LO:HI, got '" + text + "'");
    Real lo = detail::parse_decimal(text.substr(0, colon), "window LO");
    Real hi = detail::parse_decimal(text.substr(colon + 1), "window HI");
    if (!(lo < hi)) throw usage_error("window: LO must be below HI");
    return {lo, hi};
}

/// "A:B" or "A:B:STEP" inclusive order grid; a single "K" is the point grid.
inline std::vector<unsigned> parse_orders(const std::string& text) {
    static const std::regex re(R"(^(\d+)(?::(\d+))?(?::(\d+))?$)");
    std::smatch m;
    if (!std::regex_match(text, m, re))
        throw usage_error("orders: expected K, A:B, or A:B:STEP, got '" + text + "'");
    unsigned a = static_cast<unsigned>(std::stoul(m[1]));
    if (!m[2].matched) return {a};
    unsigned b = static_cast<unsigned>(std::stoul(m[2]));
    unsigned step = m[3].matched ? static_cast<unsigned>(std::stoul(m[3])) : 1;
    if (step == 0) throw usage_error("orders: step must be positive");
    if (b < a) throw usage_error("orders: range end below start");
    std::vector<unsigned> ks;
    for (unsigned k = a; k <= b; k += step) ks.push_back(k);
    return ks;
}

inline Side parse_side(const std::string& s) {
    if (s == "auto") return Side::automatic;
    if (s == "above") return Side::above;
    if (s == "below") return Side::below;
    throw usage_error("side: expected auto, above, or below");
}

// ---- formatting ----------------------------------------------------------

inline std::string rational_str(const Rational& q) {
    std::string s = numerator(q).str();
    if (denominator(q) != 1) s += "/" + denominator(q).str();
    return s;
}

/// Full-precision decimal string (round-trips at the run precision).
inline std::string fstr(const Real& x) { return x.str(); }

/// Digits supported by the error estimate, for human-facing output.
inline unsigned trusted_digits(const Cplx& value, const Real& err) {
    unsigned cap = precision_digits() > 12 ? precision_digits() - 6 : 6;
    Real av = abs(value);
    if (!(av > 0)) return 6;
    if (!(err > 0)) return cap;
    Real rel = err / av;
    if (rel >= 1) return 4;
    long d = static_cast<long>(std::floor(-static_cast<double>(log10(rel)))) + 2;
    return static_cast<unsigned>(std::clamp(d, 4l, static_cast<long>(cap)));
}

inline std::string cplx_text(const Cplx& v, unsigned digits) {
    if (v.im == 0) return v.re.str(digits);
    std::string s = v.re.str(digits);
    s += v.im > 0 ? " + " : " - ";
    s += abs(v.im).str(digits) + "i";
    return s;
}

/// Value with only its trusted digits; drops an imaginary part that sits
/// below the error estimate (noise from a complex schedule on the real axis).
inline std::string value_text(const Cplx& v, const Real& err) {
    unsigned d = trusted_digits(v, err);
    if (v.im != 0 && abs(v.im) <= 4 * err) return v.re.str(d);
    return cplx_text(v, d);
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline std::string csv_field(const std::string& f) {
    if (f.find_first_of(",\"\r\n") == std::string::npos) return f;
    std::string out = "\"";
    for (char c : f) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

/// RFC-4180 style: header row first, CRLF line terminators.
inline void write_csv(std::ostream& os, const Table& t) {
    auto line = [&os](const std::vector<std::string>& fields) {
        for (size_t i = 0; i < fields.size(); ++i) {
            if (i) os << ',';
            os << csv_field(fields[i]);
        }
        os << "\r\n";
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
}

inline ordered_json cplx_json(const Cplx& z) {
    return ordered_json{{"re", fstr(z.re)}, {"im", fstr(z.im)}};
}

// ---- parallel evaluation -------------------------------------------------

/// Runs fn(0..n-1) across worker threads. Each worker re-applies the ambient
/// precision (it is thread-local in the MPFR backend); results must be
/// written to caller-owned slots indexed by i so assembly stays ordered.
template <typename Fn>
void parallel_for(std::size_t n, unsigned precision_bits_, Fn&& fn) {
    unsigned hw = std::thread::hardware_concurrency();
    std::size_t workers = std::min<std::size_t>(n, hw ? hw : 1);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first;
    std::mutex emu;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            set_precision_bits(precision_bits_);
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(emu);
                    if (!first) first = std::current_exception();
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (first) std::rethrow_exception(first);
}

// ---- model plumbing ------------------------------------------------------

inline PowerSeries make_series(const std::string& model, unsigned K) {
    if (model == "ix3-integral") return gen_ix3_integral_series(K);
    if (model == "ix3-qm") return gen_ix3_energy_series(K);
    throw usage_error("unknown model: " + model);
}

/// Schedule per --schedule mode. In fitted mode the tabulated entries are
/// dropped so rho_at() answers from the asymptotic form at every order; the
/// fit window is the upper half of the tabulated orders, where the
/// single-correction form holds.
inline RhoSchedule resolve_schedule(const MappedSeries& ms, const RunConfig& cfg) {
    if (cfg.schedule == "file") {
        if (cfg.schedule_file.empty())
            throw usage_error("--schedule file requires --schedule-file");
        RhoSchedule s = load_schedule(cfg.schedule_file);
        if (s.model != ms.model)
            throw usage_error("schedule file is for model '" + s.model + "', run asked for '" +
                              ms.model + "'");
        return s;
    }
    RhoCriterion strat = criterion_from_string(cfg.strategy);
    if (!cfg.window.empty()) {
        if (cfg.schedule != "auto")
            throw usage_error("--window applies only to --schedule auto");
        TauWindow w = parse_window(cfg.window);
        RhoSchedule s;
        s.model = ms.model;
        s.A = ms.A;
        s.entries.push_back(select_rho(ms, cfg.order, strat, w));
        return s;
    }
    RhoSchedule sched = build_schedule(ms, cfg.order, strat);
    if (cfg.schedule == "fitted") {
        unsigned k_min = std::max(10u, cfg.order / 2);
        if (ms.model == "ix3-qm")
            sched = fit_schedule(sched, FitMode::fixed_mu, critical_mu(ms.alpha).mu_c,
                                 std::nullopt, k_min);
        else
            sched = fit_schedule(sched, FitMode::free_mu, std::nullopt, std::nullopt, k_min);
        sched.entries.clear();
    }
    return sched;
}

inline std::string schedule_origin(const RunConfig& cfg) {
    return cfg.schedule == "file" ? "file:" + cfg.schedule_file : cfg.schedule;
}

// ---- output sink ---------------------------------------------------------

class Sink {
  public:
    Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw usage_error("cannot open output file: " + path);
            stream_ = &file_;
        }
    }
    std::ostream& get() { return *stream_; }

  private:
    std::ofstream file_;
    std::ostream* stream_;
};

inline void emit(const RunConfig& cfg, std::ostream& os, const Table& table,
                 const ordered_json& json_doc, const std::string& text) {
    if (cfg.format == "csv")
        write_csv(os, table);
    else if (cfg.format == "json")
        os << json_doc.dump(2) << "\n";
    else
        os << text;
}

// ---- subcommand runners --------------------------------------------------

inline void run_series(const RunConfig& cfg, std::ostream& out) {
    PowerSeries s = make_series(cfg.model, cfg.order);

    Table t;
    t.header = {"k", "coefficient"};
    for (size_t k = 0; k < s.coeffs.size(); ++k)
        t.rows.push_back({std::to_string(k), rational_str(s.coeffs[k])});

    ordered_json j;
    j["command"] = "series";
    j["model"] = s.model;
    j["order"] = cfg.order;
    j["precision_bits"] = cfg.precision;
    j["alpha"] = rational_str(s.alpha);
    j["beta"] = rational_str(s.beta);
    j["A"] = rational_str(s.A);
    j["b"] = s.b ? ordered_json(rational_str(*s.b)) : ordered_json(nullptr);
    j["coefficients"] = ordered_json::array();
    for (const auto& c : s.coeffs) j["coefficients"].push_back(rational_str(c));

    std::ostringstream text;
    text << s.model << " series, orders 0.." << cfg.order << "\n";
    for (size_t k = 0; k < s.coeffs.size(); ++k)
        text << "  g^" << k << ": " << rational_str(s.coeffs[k]) << "\n";

    emit(cfg, out, t, j, text.str());
}

inline void run_sum(const RunConfig& cfg, std::ostream& out) {
    if (cfg.g_list.empty()) throw usage_error("sum: at least one --g value is required");
    std::vector<Cplx> gs;
    for (const auto& s : cfg.g_list) gs.push_back(parse_g(s));
    Side side = parse_side(cfg.side);

    // one extra input order so the dropped-term error estimate exists
    auto ms = compose_mapped_series(make_series(cfg.model, cfg.order + 1));
    RhoSchedule sched = resolve_schedule(ms, cfg);
    Cplx rho = sched.rho_at(cfg.order);

    std::vector<Approximant> res(gs.size());
    parallel_for(gs.size(), cfg.precision,
                 [&](std::size_t i) { res[i] = eval_approximant(ms, rho, cfg.order, gs[i], side); });

    Table t;
    t.header = {"g", "value_re", "value_im", "err_est", "lambda_re", "lambda_im"};
    for (size_t i = 0; i < res.size(); ++i)
        t.rows.push_back({cfg.g_list[i], fstr(res[i].value.re), fstr(res[i].value.im),
                          fstr(res[i].err_est), fstr(res[i].lambda.re), fstr(res[i].lambda.im)});

    ordered_json j;
    j["command"] = "sum";
    j["model"] = cfg.model;
    j["order"] = cfg.order;
    j["precision_bits"] = cfg.precision;
    j["schedule"] = schedule_origin(cfg);
    j["strategy"] = cfg.strategy;
    j["side"] = cfg.side;
    j["rho"] = cplx_json(rho);
    j["results"] = ordered_json::array();
    for (size_t i = 0; i < res.size(); ++i)
        j["results"].push_back(ordered_json{{"g", cfg.g_list[i]},
                                            {"value", cplx_json(res[i].value)},
                                            {"lambda", cplx_json(res[i].lambda)},
                                            {"err_est", fstr(res[i].err_est)}});

    std::ostringstream text;
    for (size_t i = 0; i < res.size(); ++i) {
        if (gs.size() > 1) text << "g = " << cfg.g_list[i] << ": ";
        text << value_text(res[i].value, res[i].err_est) << "\n";
    }
    emit(cfg, out, t, j, text.str());
}

inline void run_strong(const RunConfig& cfg, const std::vector<unsigned>& orders,
                       std::ostream& out) {
    unsigned k_top = *std::max_element(orders.begin(), orders.end());
    if (*std::min_element(orders.begin(), orders.end()) < 1)
        throw usage_error("strong: orders start at 1");
    auto ms = compose_mapped_series(make_series(cfg.model, k_top));
    RunConfig scfg = cfg;
    scfg.order = k_top;
    RhoSchedule sched = resolve_schedule(ms, scfg);

    std::vector<Cplx> rho(orders.size()), est(orders.size());
    parallel_for(orders.size(), cfg.precision, [&](std::size_t i) {
        rho[i] = sched.rho_at(orders[i]);
        est[i] = strong_coupling_estimate(ms, rho[i], orders[i]);
    });
    Real a = to_real(ms.A);

    Table t;
    t.header = {"k", "rho_re", "rho_im", "tau_re", "tau_im", "value_re", "value_im"};
    for (size_t i = 0; i < orders.size(); ++i) {
        Cplx tau = rho[i] * Real(orders[i]) / a;
        t.rows.push_back({std::to_string(orders[i]), fstr(rho[i].re), fstr(rho[i].im),
                          fstr(tau.re), fstr(tau.im), fstr(est[i].re), fstr(est[i].im)});
    }

    ordered_json j;
    j["command"] = "strong";
    j["model"] = cfg.model;
    j["precision_bits"] = cfg.precision;
    j["schedule"] = schedule_origin(cfg);
    j["strategy"] = cfg.strategy;
    j["results"] = ordered_json::array();
    for (size_t i = 0; i < orders.size(); ++i) {
        Cplx tau = rho[i] * Real(orders[i]) / a;
        j["results"].push_back(ordered_json{{"k", orders[i]},
                                            {"rho", cplx_json(rho[i])},
                                            {"tau", cplx_json(tau)},
                                            {"value", cplx_json(est[i])}});
    }

    std::ostringstream text;
    for (size_t i = 0; i < orders.size(); ++i)
        text << "k = " << orders[i] << ": " << cplx_text(est[i], 20) << "\n";
    emit(cfg, out, t, j, text.str());
}

inline void run_scan(const RunConfig& cfg, unsigned samples, std::ostream& out) {
    auto ms = compose_mapped_series(make_series(cfg.model, cfg.order));
    TauWindow w = cfg.window.empty() ? TauWindow{Real(2), Real(7)} : parse_window(cfg.window);
    auto rows = scan_profile(ms, cfg.order, w.lo, w.hi, samples);

    Table t;
    t.header = {"tau", "p", "dp_scaled"};
    for (const auto& r : rows) t.rows.push_back({fstr(r.tau), fstr(r.p), fstr(r.dp_scaled)});

    ordered_json j;
    j["command"] = "scan-rho";
    j["model"] = cfg.model;
    j["order"] = cfg.order;
    j["precision_bits"] = cfg.precision;
    j["rows"] = ordered_json::array();
    for (const auto& r : rows)
        j["rows"].push_back(
            ordered_json{{"tau", fstr(r.tau)}, {"p", fstr(r.p)}, {"dp_scaled", fstr(r.dp_scaled)}});

    std::ostringstream text;
    text << "P_" << cfg.order << " profile, tau in [" << str(w.lo, 6) << ", " << str(w.hi, 6)
         << "], " << samples << " samples\n";
    for (const auto& r : rows)
        text << "  tau=" << str(r.tau, 8) << "  P=" << str(r.p, 6)
             << "  AP'/k=" << str(r.dp_scaled, 6) << "\n";
    emit(cfg, out, t, j, text.str());
}

inline void run_saddle(const RunConfig& cfg, const std::string& alpha_text, bool balanced,
                       std::ostream& out) {
    Rational alpha = parse_alpha(alpha_text);
    CriticalPoint cp = critical_mu(alpha);
    std::optional<BalancedPoint> bp;
    if (balanced) bp = balanced_mu(alpha);

    Table t;
    t.header = {"alpha", "mu_c", "lambda_c"};
    std::vector<std::string> row{rational_str(alpha), fstr(cp.mu_c), fstr(cp.lambda_c)};
    if (bp) {
        t.header.insert(t.header.end(), {"balanced_mu", "rate"});
        row.push_back(fstr(bp->mu));
        row.push_back(fstr(bp->rate));
    }
    t.rows.push_back(row);

    ordered_json j;
    j["command"] = "saddle";
    j["precision_bits"] = cfg.precision;
    j["alpha"] = rational_str(alpha);
    j["mu_c"] = fstr(cp.mu_c);
    j["lambda_c"] = fstr(cp.lambda_c);
    if (bp) j["balanced"] = ordered_json{{"mu", fstr(bp->mu)}, {"rate", fstr(bp->rate)}};

    std::ostringstream text;
    text << "mu_c = " << cp.mu_c.str(10) << ", lambda_c = " << cp.lambda_c.str(10) << "\n";
    if (bp)
        text << "balanced_mu = " << bp->mu.str(8) << ", rate = " << bp->rate.str(3) << "\n";
    emit(cfg, out, t, j, text.str());
}

inline void run_fit(const RunConfig& cfg, const std::string& mode_text,
                    const std::string& exponent_text, unsigned k_min, const std::string& save_path,
                    std::ostream& out) {
    auto ms = compose_mapped_series(make_series(cfg.model, cfg.order));
    RhoCriterion strat = criterion_from_string(cfg.strategy);
    RhoSchedule sched = build_schedule(ms, cfg.order, strat);

    std::optional<Rational> exponent;
    if (!exponent_text.empty()) exponent = parse_rational(exponent_text, "exponent");
    FitMode mode;
    std::optional<Real> mu_c;
    if (mode_text == "free") {
        mode = FitMode::free_mu;
    } else if (mode_text == "fixed") {
        mode = FitMode::fixed_mu;
        mu_c = critical_mu(ms.alpha).mu_c;
    } else {
        throw usage_error("fit-rho: --mode must be free or fixed");
    }
    sched = fit_schedule(sched, mode, mu_c, exponent, k_min);
    if (!save_path.empty()) save_schedule(sched, save_path);
    const RhoFit& fit = *sched.fit;
    std::string exp_str = rational_str(fit.exponent);

    Table t;
    t.header = {"k", "rho_re", "rho_im", "tau_re", "tau_im", "criterion", "mu", "c", "exponent"};
    for (const auto& e : sched.entries) {
        Cplx tau = sched.tau_of(e);
        t.rows.push_back({std::to_string(e.k), fstr(e.rho.re), fstr(e.rho.im), fstr(tau.re),
                          fstr(tau.im), to_string(e.criterion), fstr(fit.mu), fstr(fit.c),
                          exp_str});
    }

    ordered_json j;
    j["command"] = "fit-rho";
    j["model"] = cfg.model;
    j["order"] = cfg.order;
    j["precision_bits"] = cfg.precision;
    j["mode"] = mode_text;
    j["k_min"] = k_min;
    j["mu"] = fstr(fit.mu);
    j["c"] = fstr(fit.c);
    j["exponent"] = exp_str;
    j["entries"] = ordered_json::array();
    for (const auto& e : sched.entries)
        j["entries"].push_back(ordered_json{{"k", e.k},
                                            {"rho", cplx_json(e.rho)},
                                            {"tau", cplx_json(sched.tau_of(e))},
                                            {"criterion", to_string(e.criterion)}});

    std::ostringstream text;
    text << "k tau/A = " << fit.mu.str(8) << " - " << fit.c.str(8) << " / k^(" << exp_str
         << ")   [" << mode_text << "-mu fit over k >= " << k_min << "]\n";
    if (!save_path.empty()) text << "schedule saved to " << save_path << "\n";
    emit(cfg, out, t, j, text.str());
}

inline void run_compare(const RunConfig& cfg, std::ostream& out) {
    if (cfg.g_list.empty()) throw usage_error("compare: at least one --g value is required");
    std::vector<Cplx> gs;
    for (const auto& s : cfg.g_list) {
        Cplx g = parse_g(s);
        if (g.im != 0 || !(g.re > 0))
            throw usage_error("compare: oracles cover real positive g only, got '" + s + "'");
        gs.push_back(g);
    }

    auto ms = compose_mapped_series(make_series(cfg.model, cfg.order + 1));
    RhoSchedule sched = resolve_schedule(ms, cfg);
    Cplx rho = sched.rho_at(cfg.order);

    std::vector<Approximant> odm_res(gs.size());
    std::vector<OracleResult> orc_res(gs.size());
    parallel_for(gs.size(), cfg.precision, [&](std::size_t i) {
        odm_res[i] = eval_approximant(ms, rho, cfg.order, gs[i]);
        orc_res[i] = cfg.model == "ix3-qm" ? schrodinger_E0(gs[i].re) : z_exact(gs[i].re);
    });

    Table t;
    t.header = {"g",        "odm_re",   "odm_im", "oracle_re",    "oracle_im",
                "abs_diff", "method",   "oracle_digits"};
    ordered_json results = ordered_json::array();
    std::ostringstream text;
    for (size_t i = 0; i < gs.size(); ++i) {
        Real diff = abs(odm_res[i].value - orc_res[i].value);
        std::string est = str(orc_res[i].est_accuracy, 3);
        t.rows.push_back({cfg.g_list[i], fstr(odm_res[i].value.re), fstr(odm_res[i].value.im),
                          fstr(orc_res[i].value.re), fstr(orc_res[i].value.im), fstr(diff),
                          orc_res[i].method, est});
        results.push_back(ordered_json{{"g", cfg.g_list[i]},
                                       {"odm", cplx_json(odm_res[i].value)},
                                       {"oracle", cplx_json(orc_res[i].value)},
                                       {"abs_diff", fstr(diff)},
                                       {"method", orc_res[i].method},
                                       {"oracle_digits", est}});
        text << "g = " << cfg.g_list[i] << ": odm = " << value_text(odm_res[i].value, odm_res[i].err_est)
             << ", oracle = " << cplx_text(orc_res[i].value, 20) << ", |diff| = " << str(diff, 3)
             << "  [" << orc_res[i].method << ", est " << est << " digits]\n";
    }

    ordered_json j;
    j["command"] = "compare";
    j["model"] = cfg.model;
    j["order"] = cfg.order;
    j["precision_bits"] = cfg.precision;
    j["schedule"] = schedule_origin(cfg);
    j["results"] = results;
    emit(cfg, out, t, j, text.str());
}

// ---- report bundle -------------------------------------------------------

namespace detail {

inline void write_file(const std::filesystem::path& p, const std::string& contents) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw usage_error("cannot write " + p.string());
    f << contents;
}

inline std::string csv_string(const Table& t) {
    std::ostringstream os;
    write_csv(os, t);
    return os.str();
}

} // namespace detail

/// Regenerates the desk-scale reproduction bundle: the critical-constant
/// table, the integral schedule with strong-coupling convergence, the
/// low-order strong-coupling block, and the oscillator energies against the
/// Schroedinger oracle. Assembly is single-threaded for byte-stable output.
inline void run_report(const RunConfig& cfg, unsigned qm_order, std::ostream& out) {
    std::filesystem::path dir = cfg.output.empty() ? "odm-report" : cfg.output;
    std::filesystem::create_directories(dir);

    ordered_json j;
    j["command"] = "report";
    j["precision_bits"] = cfg.precision;
    j["integral_order"] = cfg.order;
    j["qm_order"] = qm_order;

    // critical constants per alpha
    Table constants;
    constants.header = {"alpha", "mu_c", "lambda_c"};
    j["critical_constants"] = ordered_json::array();
    for (const Rational& alpha :
         {Rational(3, 2), Rational(2), Rational(5, 2), Rational(3), Rational(4)}) {
        CriticalPoint cp = critical_mu(alpha);
        constants.rows.push_back({rational_str(alpha), fstr(cp.mu_c), fstr(cp.lambda_c)});
        j["critical_constants"].push_back(ordered_json{{"alpha", rational_str(alpha)},
                                                       {"mu_c", fstr(cp.mu_c)},
                                                       {"lambda_c", fstr(cp.lambda_c)}});
    }
    detail::write_file(dir / "critical_constants.csv", detail::csv_string(constants));

    // integral model: low-order strong-coupling block and schedule table
    auto mi = compose_mapped_series(make_series("ix3-integral", cfg.order));
    auto si = build_schedule(mi, cfg.order);
    Real a_i = to_real(mi.A);
    Real z0 = z0_closed_form().value.re;
    j["z0"] = fstr(z0);

    Table low_orders;
    low_orders.header = {"k", "rho_re", "rho_im", "estimate_re", "estimate_im"};
    j["low_order_limits"] = ordered_json::array();
    for (unsigned k = 1; k <= std::min(4u, cfg.order); ++k) {
        Cplx rho = si.rho_at(k);
        Cplx est = strong_coupling_estimate(mi, rho, k);
        low_orders.rows.push_back(
            {std::to_string(k), fstr(rho.re), fstr(rho.im), fstr(est.re), fstr(est.im)});
        j["low_order_limits"].push_back(ordered_json{
            {"k", k}, {"rho", cplx_json(rho)}, {"estimate", cplx_json(est)}});
    }
    detail::write_file(dir / "low_order_limits.csv", detail::csv_string(low_orders));

    Table isched;
    isched.header = {"k", "tau_re", "tau_im", "delta_root"};
    j["integral_schedule"] = ordered_json::array();
    for (unsigned k = 5; k <= cfg.order; k += 5) {
        Cplx rho = si.rho_at(k);
        Cplx tau = rho * Real(k) / a_i;
        Real delta = abs(strong_coupling_estimate(mi, rho, k) - Cplx(z0)) / z0;
        Real root = exp(log(delta) / k);
        isched.rows.push_back({std::to_string(k), fstr(tau.re), fstr(tau.im), fstr(root)});
        j["integral_schedule"].push_back(
            ordered_json{{"k", k}, {"tau", cplx_json(tau)}, {"delta_root", fstr(root)}});
    }
    detail::write_file(dir / "integral_schedule.csv", detail::csv_string(isched));

    // oscillator energies on the fitted schedule vs the Schroedinger oracle
    RunConfig qcfg = cfg;
    qcfg.model = "ix3-qm";
    qcfg.order = qm_order;
    qcfg.schedule = qm_order >= 10 ? "fitted" : "auto"; // the fit needs a table to fit
    qcfg.window.clear();
    auto mq = compose_mapped_series(make_series("ix3-qm", qm_order + 1));
    RhoSchedule sq = resolve_schedule(mq, qcfg);
    Cplx rho_q = sq.rho_at(qm_order);

    Table energies;
    energies.header = {"g", "odm_re", "odm_im", "oracle_re", "abs_diff"};
    j["qm_energies"] = ordered_json::array();
    for (const std::string& gs : {"1", "5", "288/49"}) {
        Cplx g = parse_g(gs);
        Approximant ap = eval_approximant(mq, rho_q, qm_order, g);
        OracleResult orc = schrodinger_E0(g.re, 0, 26);
        Real diff = abs(ap.value - orc.value);
        energies.rows.push_back(
            {gs, fstr(ap.value.re), fstr(ap.value.im), fstr(orc.value.re), fstr(diff)});
        j["qm_energies"].push_back(ordered_json{{"g", gs},
                                                {"odm", cplx_json(ap.value)},
                                                {"oracle", fstr(orc.value.re)},
                                                {"abs_diff", fstr(diff)}});
    }
    detail::write_file(dir / "qm_energies.csv", detail::csv_string(energies));

    detail::write_file(dir / "report.json", j.dump(2) + "\n");
    out << "report written to " << dir.string() << "\n";
}

// ---- top-level driver ----------------------------------------------------

// Like default_precision_bits() but rejects garbage instead of ignoring it:
// a user who sets the variable wants it honored or flagged.
inline unsigned env_precision_bits() {
    const char* env = std::getenv("ODM_PREC_BITS");
    if (!env || !*env) return 512;
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0')
        throw usage_error(std::string("ODM_PREC_BITS: not a number: ") + env);
    return static_cast<unsigned>(v);
}

inline void check_common(const RunConfig& cfg) {
    if (cfg.precision < 64) throw usage_error("precision must be at least 64 bits");
    if (cfg.order < 1) throw usage_error("order must be at least 1");
    set_precision_bits(cfg.precision);
}

/// Parses args (without the program name) and executes one subcommand.
/// Returns 0 on success, 2 on usage errors, 3 on numerical failures.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"odm: order-dependent-mapping resummation of divergent series"};
    app.require_subcommand(1);
    app.fallthrough(false);

    RunConfig cfg;
    try {
        cfg.precision = env_precision_bits();
    } catch (const usage_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    std::string orders_text, alpha_text, fit_mode = "free", exponent_text, save_path;
    unsigned samples = 201, k_min = 10, qm_order = 55;
    bool balanced = false;

    auto add_common = [&](CLI::App* sub, bool with_model = true, bool with_output = true) {
        if (with_model)
            sub->add_option("--model", cfg.model, "Model series")
                ->check(CLI::IsMember({"ix3-integral", "ix3-qm"}))
                ->capture_default_str();
        sub->add_option("--precision", cfg.precision,
                        "Working precision in bits (>= 64; default from ODM_PREC_BITS)")
            ->capture_default_str();
        sub->add_option("--format", cfg.format, "Output format")
            ->check(CLI::IsMember({"text", "csv", "json"}))
            ->capture_default_str();
        if (with_output)
            sub->add_option("--output", cfg.output, "Write to this file instead of stdout");
    };
    auto add_schedule = [&](CLI::App* sub) {
        sub->add_option("--schedule", cfg.schedule, "rho_k source: per-order roots (auto), "
                                                    "asymptotic fit (fitted), or a saved file")
            ->check(CLI::IsMember({"auto", "fitted", "file"}))
            ->capture_default_str();
        sub->add_option("--schedule-file", cfg.schedule_file, "Schedule JSON for --schedule file");
        sub->add_option("--strategy", cfg.strategy, "Root-selection rule for auto schedules")
            ->check(CLI::IsMember({"zero-of-P", "zero-of-P'", "mixed"}))
            ->capture_default_str();
        sub->add_option("--window", cfg.window,
                        "Fixed tau selection window LO:HI (auto schedules only)");
    };

    CLI::App* series = app.add_subcommand("series", "Print the exact input series coefficients");
    add_common(series);
    series->add_option("--order", cfg.order, "Highest order K")->capture_default_str();
    series->footer("CSV columns: k (order), coefficient (exact rational p/q).");

    CLI::App* sum = app.add_subcommand("sum", "ODM-resum the series at given couplings");
    add_common(sum);
    sum->add_option("--order", cfg.order, "Transformation order k")->capture_default_str();
    sum->add_option("--g", cfg.g_list,
                    "Coupling; decimal, rational p/q, or complex a+bi (repeatable)");
    sum->add_option("--side", cfg.side, "Branch for negative real g: limit from above/below the cut")
        ->check(CLI::IsMember({"auto", "above", "below"}))
        ->capture_default_str();
    add_schedule(sum);
    sum->footer("CSV columns: g (as given), value_re, value_im (approximant), err_est\n"
                "(first dropped term), lambda_re, lambda_im (mapped variable).");

    CLI::App* strong = app.add_subcommand("strong", "Strong-coupling limit estimates on a k-grid");
    add_common(strong);
    strong->add_option("--order", cfg.order, "Single transformation order")->capture_default_str();
    strong->add_option("--orders", orders_text, "Order grid A:B or A:B:STEP (overrides --order)");
    add_schedule(strong);
    strong->footer("CSV columns: k, rho_re, rho_im (schedule), tau_re, tau_im (k rho/A),\n"
                   "value_re, value_im (limit estimate rho^-beta sum P_l).");

    CLI::App* scan = app.add_subcommand("scan-rho", "Tabulate P_k and A P'_k/k over a tau range");
    add_common(scan);
    scan->add_option("--order", cfg.order, "Polynomial order k")->capture_default_str();
    scan->add_option("--window", cfg.window, "tau range LO:HI")->capture_default_str();
    scan->add_option("--samples", samples, "Grid points")->capture_default_str();
    scan->footer("CSV columns: tau (= k rho/A), p (P_k value), dp_scaled (A P'_k/k).");

    CLI::App* saddle = app.add_subcommand("saddle", "Critical mapping constants for an exponent");
    add_common(saddle, false);
    saddle->add_option("--alpha", alpha_text, "Mapping exponent (p/q, integer, or decimal)")
        ->required();
    saddle->add_flag("--balanced", balanced,
                     "Also solve for the saddle-balance point and its convergence rate");
    saddle->footer("CSV columns: alpha, mu_c, lambda_c; with --balanced also balanced_mu, rate.");

    CLI::App* fit = app.add_subcommand("fit-rho", "Fit the asymptotic schedule k tau/A = mu - c/k^e");
    add_common(fit);
    fit->add_option("--order", cfg.order, "Build the schedule up to this order")
        ->capture_default_str();
    fit->add_option("--mode", fit_mode, "free: fit mu and c; fixed: pin mu to mu_c(alpha)")
        ->check(CLI::IsMember({"free", "fixed"}))
        ->capture_default_str();
    fit->add_option("--exponent", exponent_text, "Correction exponent e as p/q (default per model)");
    fit->add_option("--kmin", k_min, "Lowest order entering the fit")->capture_default_str();
    fit->add_option("--save", save_path, "Also save the fitted schedule as JSON");
    fit->add_option("--strategy", cfg.strategy, "Root-selection rule")
        ->check(CLI::IsMember({"zero-of-P", "zero-of-P'", "mixed"}))
        ->capture_default_str();
    fit->footer("CSV columns: k, rho_re, rho_im, tau_re, tau_im, criterion (selection rule),\n"
                "mu, c, exponent (fit result, repeated on every row).");

    CLI::App* compare = app.add_subcommand("compare", "ODM values against the independent oracles");
    add_common(compare);
    compare->add_option("--order", cfg.order, "Transformation order k")->capture_default_str();
    compare->add_option("--g", cfg.g_list, "Coupling (real positive; repeatable)");
    add_schedule(compare);
    compare->footer("CSV columns: g, odm_re, odm_im, oracle_re, oracle_im, abs_diff,\n"
                    "method (oracle used), oracle_digits (its accuracy estimate).");

    CLI::App* report = app.add_subcommand("report", "Write the reproduction bundle to a directory");
    add_common(report, false, false);
    report->add_option("--order", cfg.order, "Integral schedule depth")->default_val(60u);
    report->add_option("--qm-order", qm_order, "Oscillator transformation order")
        ->capture_default_str();
    report->add_option("--output", cfg.output, "Target directory (default odm-report)");
    report->footer(
        "Files: critical_constants.csv (alpha, mu_c, lambda_c), low_order_limits.csv\n"
        "(k, rho_re, rho_im, estimate_re, estimate_im), integral_schedule.csv (k,\n"
        "tau_re, tau_im, delta_root), qm_energies.csv (g, odm_re, odm_im, oracle_re,\n"
        "abs_diff), report.json (everything).");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        check_common(cfg);
        if (app.got_subcommand(series)) {
            Sink sink(cfg.output, out);
            run_series(cfg, sink.get());
        } else if (app.got_subcommand(sum)) {
            Sink sink(cfg.output, out);
            run_sum(cfg, sink.get());
        } else if (app.got_subcommand(strong)) {
            std::vector<unsigned> orders =
                orders_text.empty() ? std::vector<unsigned>{cfg.order} : parse_orders(orders_text);
            Sink sink(cfg.output, out);
            run_strong(cfg, orders, sink.get());
        } else if (app.got_subcommand(scan)) {
            Sink sink(cfg.output, out);
            run_scan(cfg, samples, sink.get());
        } else if (app.got_subcommand(saddle)) {
            Sink sink(cfg.output, out);
            run_saddle(cfg, alpha_text, balanced, sink.get());
        } else if (app.got_subcommand(fit)) {
            Sink sink(cfg.output, out);
            run_fit(cfg, fit_mode, exponent_text, k_min, save_path, sink.get());
        } else if (app.got_subcommand(compare)) {
            Sink sink(cfg.output, out);
            run_compare(cfg, sink.get());
        } else if (app.got_subcommand(report)) {
            run_report(cfg, qm_order, out);
        }
    } catch (const usage_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const odm::error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

} // namespace odm::cli

#endif
