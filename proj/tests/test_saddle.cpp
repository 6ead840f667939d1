#include <catch2/catch_amalgamated.hpp>

#include <odm/saddle.hpp>

#include <vector>

using namespace odm;

namespace {

struct CriticalRow {
    Rational alpha;
    const char* mu_c;
    const char* neg_lambda_c;
};

const std::vector<CriticalRow>& critical_rows() {
    static const std::vector<CriticalRow> rows = {
        {Rational(3, 2), "4.031233504", "0.2429640300"},
        {Rational(2), "4.466846120", "0.2136524524"},
        {Rational(5, 2), "4.895690188", "0.1896450439"},
        {Rational(3), "5.3168634291", "0.1699396648"},
        {Rational(4), "6.1359656420", "0.14003129119"},
    };
    return rows;
}

bool has_point(const std::vector<Cplx>& pts, const Cplx& want, const Real& tol) {
    for (const auto& p : pts)
        if (abs(p - want) <= tol) return true;
    return false;
}

} // namespace

TEST_CASE("critical points for five shape parameters") {
    for (const auto& row : critical_rows()) {
        auto cp = critical_mu(row.alpha);
        INFO("alpha = " << str(to_real(row.alpha), 4));
        CHECK(abs(cp.mu_c - Real(row.mu_c)) <= Real(row.mu_c) * Real("2e-9"));
        CHECK(abs(-cp.lambda_c - Real(row.neg_lambda_c)) <= Real(row.neg_lambda_c) * Real("1e-9"));
        // lambda_c in (1/(1-alpha), 0)
        CHECK(cp.lambda_c < 0);
        CHECK(cp.lambda_c > -1 / (to_real(row.alpha) - 1));
    }
    CHECK_THROWS_AS(critical_mu(Rational(1)), domain_error);
}

TEST_CASE("critical points satisfy both defining equations at 256 bits") {
    PrecisionGuard guard(256);
    for (const auto& row : critical_rows()) {
        auto cp = critical_mu(row.alpha);
        Real a = to_real(row.alpha);
        Real stationarity = detail::saddle_fn(row.alpha, cp.mu_c, cp.lambda_c);
        Real vanishing = pow(1 - cp.lambda_c, a) / (cp.lambda_c * cp.mu_c) - log(-cp.lambda_c);
        CHECK(abs(stationarity) <= Real("1e-12"));
        CHECK(abs(vanishing) <= Real("1e-12"));
        // sigma itself has zero real part there
        CHECK(abs(sigma(row.alpha, cp.mu_c, Cplx(cp.lambda_c)).re) <= Real("1e-10"));
    }
}

TEST_CASE("stationary points by polynomial substitution") {
    auto p52 = saddle_points(Rational(5, 2), Real("4.895690188"));
    CHECK(has_point(p52, Cplx(Real("-0.1896450439")), Real("1e-9")));

    auto p3 = saddle_points(Rational(3), Real("5.3168634291"));
    CHECK(has_point(p3, Cplx(Real("-0.1699396648")), Real("1e-9")));

    auto bal = saddle_points(Rational(3), Real("4.62987613"));
    CHECK(has_point(bal, Cplx(Real("-0.1897168")), Real("1e-6")));
    CHECK(has_point(bal, Cplx(Real("0.8448584"), Real("1.386261")), Real("1e-5")));
    CHECK(has_point(bal, Cplx(Real("0.8448584"), Real("-1.386261")), Real("1e-5")));

    // every return satisfies the stationarity equation on the principal branch
    for (const auto& l : bal) {
        Cplx resid = pow(Cplx(1) - l, Real(2)) * (Cplx(1) + 2 * l) + l * Real("4.62987613");
        CHECK(abs(resid) <= Real("1e-10") * (1 + 5 * abs(l)));
    }

    // exactly one real stationary point inside (-1/(alpha-1), 0)
    for (const auto& row : critical_rows()) {
        auto pts = saddle_points(row.alpha, Real(5));
        int count = 0;
        for (const auto& l : pts)
            if (abs(l.im) < pow10(-40) && l.re < 0 && l.re > -1 / (to_real(row.alpha) - 1))
                ++count;
        CHECK(count == 1);
        Real direct = real_saddle(row.alpha, Real(5));
        CHECK(has_point(pts, Cplx(direct), pow10(-static_cast<long>(precision_digits()) + 20)));
    }

    CHECK_THROWS_AS(saddle_points(Rational(3), Real(-1)), domain_error);
    CHECK_THROWS_AS(saddle_points(Rational(1, 2), Real(5)), domain_error);
}

TEST_CASE("sigma conventions and limits") {
    CHECK_THROWS_AS(sigma(Rational(3), Real(5), Cplx(0)), domain_error);
    CHECK_THROWS_AS(sigma(Rational(3), Real(5), Cplx(1)), domain_error);

    // real negative lambda: imaginary part is -pi from the log branch
    Cplx s = sigma(Rational(3), Real(5), Cplx(Real("-0.2")));
    CHECK(abs(s.im + pi_const()) < pow10(-40));

    // along the saddle path lambda -> 0- (mu large), -ln|lambda| wins and
    // the rate diverges to +infinity
    Real s6 = sigma(Rational(3), Real("1e6"), Cplx(real_saddle(Rational(3), Real("1e6")))).re;
    Real s8 = sigma(Rational(3), Real("1e8"), Cplx(real_saddle(Rational(3), Real("1e8")))).re;
    CHECK(s6 > 10);
    CHECK(s8 > s6 + 4);
}

TEST_CASE("real-saddle rate grows with mu") {
    for (const auto& row : critical_rows()) {
        Real prev;
        bool first = true;
        for (Real mu = 2; mu <= 8; mu += Real(1) / 2) {
            Real rs = real_saddle(row.alpha, mu);
            Real re_sig = sigma(row.alpha, mu, Cplx(rs)).re;
            if (!first) CHECK(re_sig > prev);
            prev = re_sig;
            first = false;
        }
    }
}

TEST_CASE("balanced saddle point for the cubic integral shape") {
    auto bp = balanced_mu(Rational(3));
    CHECK(abs(bp.mu - Real("4.62987613")) <= Real("5e-8"));
    CHECK(abs(bp.rate - Real("0.775")) <= Real("5e-4"));
    CHECK(bp.mu < critical_mu(Rational(3)).mu_c);

    // shape without a complex pair cannot balance
    CHECK_THROWS_AS(balanced_mu(Rational(2)), convergence_error);
}

TEST_CASE("per-order damping factor from lambda^k") {
    Real R = Real(24) / 5 * critical_mu(Rational(5, 2)).mu_c;
    CHECK(abs(pow(R, Real(2) / 5) - Real("3.5355")) < Real("5e-4"));

    auto lf5 = lambda_factor(Cplx(Real(5)), R, Rational(5, 2), 1);
    CHECK(abs(lf5.coefficient - Real("1.86")) < Real("5e-3"));

    // combined with the strong-coupling constant, matches the observed total
    auto lf1 = lambda_factor(Cplx(Real(1)), R, Rational(5, 2), 1);
    CHECK(abs(lf1.coefficient + Real("0.292") - Real("3.85")) <= Real("3.85") * Real("0.02"));

    // factor -> 1 as |g| -> infinity
    auto lf_inf = lambda_factor(Cplx(Real("1e12")), R, Rational(5, 2), 10);
    CHECK(lf_inf.factor > Real("0.99"));
    CHECK(lf_inf.factor < 1);

    // exponent accumulates like k^(1-1/alpha)
    auto a1 = lambda_factor(Cplx(Real(2)), R, Rational(5, 2), 1);
    auto a32 = lambda_factor(Cplx(Real(2)), R, Rational(5, 2), 32);
    CHECK(abs(a32.exponent - a1.exponent * pow(Real(32), Real(3) / 5)) < pow10(-30));

    CHECK_THROWS_AS(lambda_factor(Cplx(0), R, Rational(5, 2), 1), domain_error);
}

TEST_CASE("convergence domain descriptor") {
    Real R = Real(24) / 5 * critical_mu(Rational(5, 2)).mu_c;
    auto dom = convergence_domain(Rational(5, 2), R, Real("-0.292"));

    // boundary on the second sheet at theta = 5 pi / 2
    Real theta2 = 5 * pi_const() / 2;
    CHECK(abs(dom.boundary_radius(theta2) - Real("510.0")) < Real("0.1"));
    CHECK(dom.contains(Real(600), theta2));
    CHECK_FALSE(dom.contains(Real(400), theta2));

    // sector |theta| < alpha pi / 2 is inside at any modulus
    for (const char* m : {"1e-6", "1", "1e8"})
        for (double frac : {0.0, 0.5, 0.9, -0.9})
            CHECK(dom.contains(Real(m), 5 * pi_const() / 4 * Real(frac)));

    // no boundary along rays inside the sector
    CHECK_THROWS_AS(dom.boundary_radius(Real(0)), domain_error);

    // positive-C domain: bounded, boundary R C^-alpha on the real axis
    auto dp = convergence_domain(Rational(5, 2), R, Real("0.292"));
    Real b0 = dp.boundary_radius(Real(0));
    CHECK(abs(b0 - R * pow(Real("0.292"), Real(-5) / 2)) < pow10(-30));
    CHECK(dp.contains(b0 / 2, Real(0)));
    CHECK_FALSE(dp.contains(b0 * 2, Real(0)));

    CHECK_THROWS_AS(convergence_domain(Rational(5, 2), R, Real(0)), domain_error);
    CHECK_THROWS_AS(convergence_domain(Rational(1, 2), R, Real(1)), domain_error);
    CHECK_THROWS_AS(dom.contains(Real(0), Real(0)), domain_error);
}
