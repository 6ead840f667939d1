#include <catch2/catch_amalgamated.hpp>

#include <odm/rho_select.hpp>
#include <odm/series_gen.hpp>

#include <cstdio>
#include <string>

using namespace odm;

namespace {

const MappedSeries& integral_ms_30() {
    static MappedSeries ms = compose_mapped_series(gen_ix3_integral_series(31));
    return ms;
}

} // namespace

TEST_CASE("order 1 uses the zero of P_1") {
    auto e = select_rho(integral_ms_30(), 1, RhoCriterion::zero_of_p, {Real(0), Real(100)});
    CHECK(e.criterion == RhoCriterion::zero_of_p);
    CHECK(abs(e.rho - Cplx(Rational(12, 5))) < pow10(-40));
    REQUIRE(e.root_pool.size() == 1);
}

TEST_CASE("low-order selections match the quoted values") {
    const auto& ms = integral_ms_30();
    auto e2 = select_rho(ms, 2, RhoCriterion::zero_of_p_prime, {Real(1), Real(10)});
    CHECK(abs(e2.rho - Cplx(Rational(12, 11))) < pow10(-40));

    auto e3 = select_rho(ms, 3, RhoCriterion::zero_of_p_prime, {Real(1), Real(10)});
    CHECK(abs(e3.rho.re - Real("0.7058")) < Real("1e-4"));
    CHECK(abs(e3.rho.im - Real("0.1866")) < Real("1e-4"));
    CHECK(e3.rho.im > 0); // conjugate pair collapses to the upper member

    auto e4 = select_rho(ms, 4, RhoCriterion::zero_of_p_prime, {Real(1), Real(10)});
    CHECK(abs(e4.rho.re - Real("0.5894")) < Real("1e-4"));
    CHECK(abs(e4.rho.im - Real("0.2633")) < Real("1e-4"));
}

TEST_CASE("schedule to order 30 tracks the tabulated scaled values") {
    auto sched = build_schedule(integral_ms_30(), 30);
    REQUIRE(sched.entries.size() == 30);

    struct Row {
        unsigned k;
        const char* re;
        const char* im;
    };
    const Row rows[] = {{5, "4.1385", "0"},       {10, "4.3300", "0"},
                        {15, "4.3450", "0"},      {20, "4.4210", "0.4544"},
                        {25, "4.4954", "0.2984"}, {30, "4.5365", "0.2260"}};
    for (const auto& row : rows) {
        const auto* e = sched.entry_at(row.k);
        REQUIRE(e != nullptr);
        Cplx tau = sched.tau_of(*e);
        INFO("k=" << row.k << " tau=" << str(tau.re, 8) << " " << str(tau.im, 8));
        CHECK(abs(tau.re - Real(row.re)) <= Real("1.01e-4"));
        CHECK(abs(tau.im - Real(row.im)) <= Real("1.01e-4"));
    }

    const Real rel_bound = pow10(-static_cast<long>(precision_digits()) + 16);
    for (const auto& e : sched.entries) {
        CHECK(e.rho.re > 0);
        CHECK(e.rho.im >= 0);
        if (e.k == 1) continue;
        // derivative criterion: residual small relative to the magnitude sum
        RatPoly dp = poly_derivative(integral_ms_30().at(e.k));
        Cplx val(0);
        Real scale(0), ar = abs(e.rho);
        for (size_t i = dp.size(); i-- > 0;) {
            val = val * e.rho + Cplx(dp[i]);
            scale = scale * ar + abs(to_real(dp[i]));
        }
        if (scale < 1) scale = 1;
        CHECK(abs(val) <= rel_bound * scale);
    }
}

TEST_CASE("selection is deterministic and pools are conjugate closed") {
    const auto& ms = integral_ms_30();
    auto a = select_rho(ms, 12, RhoCriterion::zero_of_p_prime, {Real(3), Real(6)});
    auto b = select_rho(ms, 12, RhoCriterion::zero_of_p_prime, {Real(3), Real(6)});
    CHECK(str(a.rho.re, 50) == str(b.rho.re, 50));
    CHECK(str(a.rho.im, 50) == str(b.rho.im, 50));

    const Real tol = pow10(-static_cast<long>(precision_digits()) + 16);
    for (const auto& r : a.root_pool) {
        if (abs(r.im) <= tol) continue;
        bool has_conj = false;
        for (const auto& s : a.root_pool)
            if (abs(s - conj(r)) <= tol) has_conj = true;
        CHECK(has_conj);
    }
}

TEST_CASE("empty window reports the candidates") {
    try {
        select_rho(integral_ms_30(), 6, RhoCriterion::zero_of_p_prime, {Real(100), Real(200)});
        FAIL("expected domain_error");
    } catch (const domain_error& ex) {
        CHECK(std::string(ex.what()).find("candidates") != std::string::npos);
    }
}

TEST_CASE("profile scan brackets the small-value region") {
    const auto& ms = integral_ms_30();

    // order 1: linear in tau, sign change at tau = k rho_1 / A = 3.6
    auto rows1 = scan_profile(ms, 1, Real(3), Real(4), 10);
    REQUIRE(rows1.size() == 10);
    for (size_t i = 2; i < rows1.size(); ++i) {
        Real second_diff = rows1[i].p - 2 * rows1[i - 1].p + rows1[i - 2].p;
        CHECK(abs(second_diff) < pow10(-80));
    }
    int sign_changes = 0;
    for (size_t i = 1; i < rows1.size(); ++i)
        if ((rows1[i - 1].p > 0) != (rows1[i].p > 0)) {
            ++sign_changes;
            CHECK(rows1[i - 1].tau < Real("3.6"));
            CHECK(rows1[i].tau > Real("3.6"));
        }
    CHECK(sign_changes == 1);

    // order 30: both |P_k| and |A P'_k / k| drop below 1% of their maxima
    auto rows30 = scan_profile(ms, 30, Real(3), Real(7), 161);
    Real max_p(0), max_dp(0);
    for (const auto& r : rows30) {
        if (abs(r.p) > max_p) max_p = abs(r.p);
        if (abs(r.dp_scaled) > max_dp) max_dp = abs(r.dp_scaled);
    }
    bool small_region = false;
    for (const auto& r : rows30)
        if (abs(r.p) < max_p / 100 && abs(r.dp_scaled) < max_dp / 100) small_region = true;
    CHECK(small_region);

    CHECK_THROWS_AS(scan_profile(ms, 1, Real(0), Real(1), 1), domain_error);
}

TEST_CASE("small-value region location persists to order 60", "[slow]") {
    auto ms = compose_mapped_series(gen_ix3_integral_series(60));
    auto locate = [&](unsigned k) {
        auto rows = scan_profile(ms, k, Real(3), Real(7), 201);
        Real max_p(0), max_dp(0);
        for (const auto& r : rows) {
            if (abs(r.p) > max_p) max_p = abs(r.p);
            if (abs(r.dp_scaled) > max_dp) max_dp = abs(r.dp_scaled);
        }
        Real best_tau = rows[0].tau, best(1e9);
        for (const auto& r : rows) {
            Real score = abs(r.p) / max_p;
            if (abs(r.dp_scaled) / max_dp > score) score = abs(r.dp_scaled) / max_dp;
            if (score < best) {
                best = score;
                best_tau = r.tau;
            }
        }
        return best_tau;
    };
    Real t30 = locate(30), t60 = locate(60);
    CHECK(abs(t60 - t30) <= t30 / 10);
}

TEST_CASE("least-squares schedule fits") {
    // synthetic: tau = 5 - 3 k^(-2/5), recovered exactly
    std::vector<Real> ks, taus;
    for (unsigned k = 5; k <= 40; k += 5) {
        ks.emplace_back(k);
        taus.push_back(Real(5) - 3 * exp(-Real(2) / 5 * log(Real(k))));
    }
    auto [mu, c] = fit_tau_sequence(ks, taus, Rational(2, 5), FitMode::free_mu);
    CHECK(abs(mu - 5) < pow10(-40));
    CHECK(abs(c - 3) < pow10(-40));

    auto [mu2, c2] = fit_tau_sequence(ks, taus, Rational(2, 5), FitMode::fixed_mu, Real(5));
    CHECK(mu2 == 5);
    CHECK(abs(c2 - 3) < pow10(-40));

    std::vector<Real> same_k{Real(7), Real(7), Real(7)};
    std::vector<Real> ys{Real(1), Real(2), Real(3)};
    CHECK_THROWS_AS(fit_tau_sequence(same_k, ys, Rational(1), FitMode::free_mu), domain_error);

    // integral schedule, odd-even averaged, 1/k correction: mu lands near 4.65
    auto sched = build_schedule(integral_ms_30(), 30);
    std::vector<Real> kk, tt;
    for (const auto& e : sched.entries)
        if (e.k >= 10) {
            kk.emplace_back(e.k);
            tt.push_back(sched.tau_of(e).re);
        }
    auto avg = odd_even_average(tt);
    std::vector<Real> ka(kk.begin() + 1, kk.end());
    auto [mu3, c3] = fit_tau_sequence(ka, avg, Rational(1), FitMode::free_mu);
    CHECK(mu3 > Real("4.4"));
    CHECK(mu3 < Real("4.9"));
}

TEST_CASE("fit attaches a generator for arbitrary order") {
    auto sched = fit_schedule(build_schedule(integral_ms_30(), 30), FitMode::free_mu);
    REQUIRE(sched.fit.has_value());
    // tabulated order returns the tabulated value
    CHECK(abs(sched.rho_at(1) - Cplx(Rational(12, 5))) < pow10(-40));
    // beyond the table: fitted form (A/k)(mu - c k^-e)
    Cplx r100 = sched.rho_at(100);
    Real want = to_real(sched.A) / 100 *
                (sched.fit->mu - sched.fit->c * exp(-to_real(sched.fit->exponent) * log(Real(100))));
    CHECK(abs(r100 - Cplx(want)) < pow10(-40));

    RhoSchedule nofit = build_schedule(integral_ms_30(), 12);
    CHECK_THROWS_AS(nofit.rho_at(40), domain_error);
    RhoSchedule two;
    two.entries.resize(2);
    CHECK_THROWS_AS(fit_schedule(two, FitMode::free_mu), domain_error);
    CHECK_THROWS_AS(fit_schedule(build_schedule(integral_ms_30(), 12), FitMode::fixed_mu),
                    domain_error);
}

TEST_CASE("odd-even averaging") {
    std::vector<Real> seq{Real(1), Real(3), Real(1), Real(3)};
    auto avg = odd_even_average(seq);
    REQUIRE(avg.size() == 3);
    for (const auto& v : avg) CHECK(v == 2);

    std::vector<Real> constant{Real(7), Real(7), Real(7)};
    for (const auto& v : odd_even_average(constant)) CHECK(v == 7);

    std::vector<Real> one{Real(1)};
    CHECK_THROWS_AS(odd_even_average(one), domain_error);
}

TEST_CASE("schedule persistence round trip") {
    auto sched = fit_schedule(build_schedule(integral_ms_30(), 12), FitMode::free_mu);
    std::string path = "sched_roundtrip.json";
    save_schedule(sched, path);
    auto back = load_schedule(path);
    std::remove(path.c_str());

    CHECK(back.model == sched.model);
    CHECK(back.A == sched.A);
    REQUIRE(back.entries.size() == sched.entries.size());
    for (size_t i = 0; i < back.entries.size(); ++i) {
        CHECK(back.entries[i].k == sched.entries[i].k);
        CHECK(back.entries[i].criterion == sched.entries[i].criterion);
        CHECK(abs(back.entries[i].rho - sched.entries[i].rho) <
              pow10(-static_cast<long>(precision_digits()) + 8));
        CHECK(back.entries[i].root_pool.size() == sched.entries[i].root_pool.size());
    }
    REQUIRE(back.fit.has_value());
    CHECK(abs(back.fit->mu - sched.fit->mu) < pow10(-static_cast<long>(precision_digits()) + 8));
    CHECK(back.fit->exponent == sched.fit->exponent);

    CHECK_THROWS_AS(load_schedule("does_not_exist.json"), resource_error);
}
