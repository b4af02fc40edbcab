#include <doctest.h>

#include <cmath>
#include <complex>

#include "support/oracles.hpp"
#include "tevr/bessel.hpp"

using tevr::cplx;

namespace {

double rel_diff(cplx a, cplx b) {
    double scale = std::max(std::abs(a), std::abs(b));
    if (scale == 0.0) return 0.0;
    return std::abs(a - b) / scale;
}

} // namespace

TEST_CASE("values at the origin") {
    auto e0 = tevr::bessel_j_pair(0, {0.0, 0.0});
    CHECK(e0.value_j == cplx(1.0, 0.0));
    CHECK(e0.value_jprime == cplx(0.0, 0.0));

    auto e3 = tevr::bessel_j_pair(3, {0.0, 0.0});
    CHECK(e3.value_j == cplx(0.0, 0.0));
    CHECK(e3.value_jprime == cplx(0.0, 0.0));

    auto s0 = tevr::bessel_j_log_scaled(0, {0.0, 0.0});
    CHECK(s0.first == cplx(1.0, 0.0));
    CHECK(s0.second == 0.0);
}

TEST_CASE("first zero of J0 located by the series oracle") {
    double w0 = oracle::bisect(
        [](double x) { return oracle::ddc_to(oracle::bessel_j_series_dd(0, {x, 0.0}).value).real(); },
        2.0, 3.0);
    CHECK(w0 == doctest::Approx(2.404825557695773).epsilon(1e-12));
    auto e = tevr::bessel_j_pair(0, {w0, 0.0});
    CHECK(std::abs(e.value_j) < 1e-10);
}

TEST_CASE("log-scaled value at w = 100i matches the dd series") {
    auto s = tevr::bessel_j_log_scaled(0, {0.0, 100.0});
    auto ref = oracle::bessel_j_series_dd(0, {0.0, 100.0});
    REQUIRE(ref.converged);
    REQUIRE(ref.rel_error_bound() < 1e-12);
    // compare in log form: value is ~1e42
    double lref = std::log(oracle::ddc_abs(ref.value));
    double lgot = std::log(std::abs(s.first)) + s.second;
    CHECK(std::fabs(lgot - lref) < 1e-9);
    // phase: J_0(100i) = I_0(100) > 0 real
    CHECK(std::fabs(std::arg(s.first)) < 1e-9);
}

TEST_CASE("pair at (5, 3+4i) matches the dd series") {
    cplx w{3.0, 4.0};
    auto e = tevr::bessel_j_pair(5, w);
    auto rj = oracle::bessel_j_series_dd(5, w);
    auto rp = oracle::bessel_jprime_series_dd(5, w);
    REQUIRE(rj.rel_error_bound() < 1e-12);
    CHECK(rel_diff(e.value_j, oracle::ddc_to(rj.value)) < 1e-10);
    CHECK(rel_diff(e.value_jprime, oracle::ddc_to(rp.value)) < 1e-10);
}

TEST_CASE("three-term recurrence over random samples") {
    oracle::rng gen(42);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        int k = gen.uniform_int(1, 300);
        double r = gen.uniform(1e-8, 200.0);
        double th = gen.uniform(0.0, 2.0 * M_PI);
        cplx w = std::polar(r, th);
        auto em = tevr::bessel_j_scaled((unsigned)(k - 1), w);
        auto ec = tevr::bessel_j_scaled((unsigned)k, w);
        auto ep = tevr::bessel_j_scaled((unsigned)(k + 1), w);
        // compare at a common scale
        double ls = std::max({em.j.log_scale, ec.j.log_scale, ep.j.log_scale});
        cplx jm = em.j.value * std::exp(em.j.log_scale - ls);
        cplx jc = ec.j.value * std::exp(ec.j.log_scale - ls);
        cplx jp = ep.j.value * std::exp(ep.j.log_scale - ls);
        double denom = std::max({std::abs(jm), std::abs(jc), std::abs(jp)});
        if (denom == 0.0) continue;
        double resid = std::abs(jm + jp - (2.0 * (double)k / w) * jc) / denom;
        worst = std::max(worst, resid);
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("agreement with the dd series oracle where it certifies itself") {
    oracle::rng gen(7);
    int accepted = 0;
    double worst = 0.0;
    while (accepted < 1000) {
        int k = gen.uniform_int(0, 300);
        double r = gen.uniform(1e-6, 200.0);
        double th = gen.uniform(0.0, 2.0 * M_PI);
        cplx w = std::polar(r, th);
        auto ref = oracle::bessel_j_series_dd((unsigned)k, w);
        if (!ref.converged || ref.rel_error_bound() > 1e-11) continue;
        double mag = oracle::ddc_abs(ref.value);
        if (mag == 0.0) continue;
        auto got = tevr::bessel_j_scaled((unsigned)k, w);
        double lgot = got.j.log_abs();
        double lref = std::log(mag);
        // compare log-magnitudes and phases (values can leave double range)
        worst = std::max(worst, std::fabs(lgot - lref));
        cplx ref_phase = oracle::ddc_to(ref.value) / mag;
        cplx got_phase = got.j.is_zero() ? cplx(0, 0) : got.j.value / std::abs(got.j.value);
        worst = std::max(worst, std::abs(ref_phase - got_phase));
        ++accepted;
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("conjugate symmetry") {
    oracle::rng gen(11);
    for (int i = 0; i < 200; ++i) {
        int k = gen.uniform_int(0, 120);
        cplx w = {gen.uniform(-80.0, 80.0), gen.uniform(-40.0, 40.0)};
        auto a = tevr::bessel_j_scaled((unsigned)k, w);
        auto b = tevr::bessel_j_scaled((unsigned)k, std::conj(w));
        CHECK(a.j.log_scale == doctest::Approx(b.j.log_scale).epsilon(1e-14));
        CHECK(std::abs(std::conj(b.j.value) - a.j.value) <= 1e-13 * (std::abs(a.j.value) + 1e-300));
    }
}

TEST_CASE("small-argument law") {
    oracle::rng gen(13);
    for (int i = 0; i < 500; ++i) {
        int k = gen.uniform_int(0, 10);
        double r = gen.uniform(1e-4, 0.1);
        double th = gen.uniform(0.0, 2.0 * M_PI);
        cplx w = std::polar(r, th);
        auto e = tevr::bessel_j_pair((unsigned)k, w);
        cplx lead = std::pow(w / 2.0, (double)k) / std::tgamma((double)k + 1.0);
        CHECK(std::abs(e.value_j - lead) <= std::pow(std::abs(w), (double)k + 2.0));
    }
}

TEST_CASE("derivative identity holds by construction") {
    oracle::rng gen(17);
    for (int i = 0; i < 300; ++i) {
        int k = gen.uniform_int(1, 200);
        cplx w = std::polar(gen.uniform(0.5, 150.0), gen.uniform(0.0, 2.0 * M_PI));
        auto ek = tevr::bessel_j_scaled((unsigned)k, w);
        auto ekm = tevr::bessel_j_scaled((unsigned)(k - 1), w);
        double ls = std::max(ek.j.log_scale, std::max(ekm.j.log_scale, ek.jprime.log_scale));
        cplx jp = ek.jprime.value * std::exp(ek.jprime.log_scale - ls);
        cplx jk = ek.j.value * std::exp(ek.j.log_scale - ls);
        cplx jm = ekm.j.value * std::exp(ekm.j.log_scale - ls);
        double denom = std::max({std::abs(jp), std::abs(jk), std::abs(jm)});
        if (denom == 0.0) continue;
        CHECK(std::abs(jp - (jm - (double)k / w * jk)) / denom < 1e-9);
    }
}

TEST_CASE("error paths") {
    CHECK_THROWS_AS((void)tevr::bessel_j_pair(0, {std::nan(""), 0.0}), tevr::error);
    CHECK_THROWS_AS((void)tevr::bessel_j_pair(2001, {1.0, 0.0}), tevr::error);
    CHECK_THROWS_AS((void)tevr::bessel_j_pair(0, {2e4, 0.0}), tevr::error);
    // growth beyond double range must be signalled, not silently inf
    CHECK_THROWS_AS((void)tevr::bessel_j_pair(0, {0.0, 2000.0}), tevr::error);
    auto s = tevr::bessel_j_log_scaled(0, {0.0, 2000.0});
    CHECK(std::isfinite(s.second));
    CHECK(s.second > 1900.0); // I_0(2000) ~ e^2000/sqrt(...)
}
