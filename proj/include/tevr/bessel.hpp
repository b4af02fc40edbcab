#pragma once

// Complex Bessel J kernel for integer orders: ascending series where the
// terms are monotone enough to sum safely, Miller backward recurrence with
// block rescaling otherwise. Values are exposed both plain and in
// value*exp(log_scale) form since J_k(w) grows like exp(|Im w|).

#include <cmath>
#include <complex>
#include <vector>

#include "tevr/errors.hpp"
#include "tevr/scaled.hpp"

namespace tevr {

struct bessel_eval {
    unsigned order = 0;
    cplx argument{0.0, 0.0};
    cplx value_j{0.0, 0.0};
    cplx value_jprime{0.0, 0.0};
};

struct bessel_scaled_eval {
    scaled_cplx j;
    scaled_cplx jprime;
};

namespace bessel_detail {

constexpr unsigned max_order = 2000;
constexpr double max_abs_arg = 1e4;

inline void check_domain(unsigned order, cplx w) {
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
        fail(errc::non_finite, "bessel: non-finite argument");
    if (order > max_order) fail(errc::invalid_argument, "bessel: order above supported range");
    if (std::abs(w) > max_abs_arg) fail(errc::invalid_argument, "bessel: |w| above supported range");
}

using ldc = std::complex<long double>;

// Ascending series for J_k. Valid when terms decrease fast enough that no
// cancellation builds up; callers gate on |w| <= 12 or |w|^2 <= 2(k+1).
// The double-precision path covers the representable range; the long double
// path keeps the far tails (k >> 1 with tiny |w|) alive.
inline ldc series_j(unsigned k, ldc w) {
    long double mag_log =
        (long double)k * std::log(std::abs(w) / 2.0L) - std::lgamma((long double)k + 1.0L);
    if (mag_log > -600.0L && mag_log < 600.0L) {
        cplx wd((double)w.real(), (double)w.imag());
        cplx half = wd / 2.0;
        cplx t0 = std::polar(std::exp((double)mag_log), (double)k * std::arg(wd));
        cplx q = -half * half;
        cplx term = t0, sum = t0;
        for (unsigned m = 0; m < 400; ++m) {
            term *= q / ((double)(m + 1) * (double)(k + m + 1));
            sum += term;
            // magnitude test: |term|^2 can underflow for heavily scaled sums
            if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
        }
        return ldc(sum.real(), sum.imag());
    }
    ldc half = w / (long double)2;
    ldc t0 = std::exp((long double)k * std::log(half) - (ldc)std::lgamma((long double)k + 1));
    ldc q = -half * half;
    ldc term = t0, sum = t0;
    for (unsigned m = 0; m < 400; ++m) {
        term *= q / ((long double)(m + 1) * (long double)(k + m + 1));
        sum += term;
        if (std::abs(term) <= 1e-25L * std::abs(sum)) break;
    }
    return sum;
}

inline bool use_series(unsigned k, cplx w) {
    double aw = std::abs(w);
    return aw <= 12.0 || aw * aw <= 2.0 * (double)(k + 1);
}

// cos(w) in scaled form, safe for large |Im w|.
inline scaled_cplx scaled_cos(cplx w) {
    double x = w.real(), y = w.imag();
    double ay = std::fabs(y);
    if (ay < 30.0) return scaled_cplx::from({std::cos(x) * std::cosh(y), -std::sin(x) * std::sinh(y)});
    double e2 = std::exp(-2.0 * ay);
    double sgn = (y >= 0.0) ? 1.0 : -1.0;
    scaled_cplx r{{std::cos(x) * 0.5 * (1.0 + e2), -std::sin(x) * sgn * 0.5 * (1.0 - e2)}, ay};
    r.normalize();
    return r;
}

struct miller_taps {
    scaled_cplx jk, jkm1, jkp1; // J_k, J_{k-1} (k>=1), J_{k+1}
};

// Backward recurrence from above the turning point, normalized either by
// J_0 + 2*sum J_{2m} = 1 (small |Im w|) or by the cosine identity
// J_0 + 2*sum (-1)^m J_{2m} = cos(w), whose magnitude matches the terms when
// |Im w| is large.
inline miller_taps miller(unsigned k, cplx w) {
    const double rescale_hi = 0x1p400;
    const double rescale_log = 400.0 * M_LN2;
    unsigned start = k + 20 + (unsigned)std::ceil(1.2 * std::abs(w));

    cplx inv_w = 1.0 / w;
    cplx yp(0.0, 0.0);   // y_{m+1}
    cplx yc(1.0, 0.0);   // y_m
    ldc s1(0.0L, 0.0L), s2(0.0L, 0.0L);
    long shifts = 0;

    cplx tap_k(0, 0), tap_km1(0, 0), tap_kp1(0, 0);
    long c_k = 0, c_km1 = 0, c_kp1 = 0;
    bool have_k = (k == start), have_km1 = false, have_kp1 = false;
    if (have_k) tap_k = yc;
    if (k + 1 == start) { tap_kp1 = yc; have_kp1 = true; }

    if (start % 2 == 0) {
        long double coef = (start == 0) ? 1.0L : 2.0L;
        s1 = coef * ldc(yc);
        s2 = coef * ((start / 2) % 2 == 0 ? 1.0L : -1.0L) * ldc(yc);
    }

    for (unsigned m = start; m >= 1; --m) {
        cplx ym1 = (2.0 * (double)m) * inv_w * yc - yp;
        yp = yc;
        yc = ym1;
        unsigned idx = m - 1;
        if (idx == k + 1) { tap_kp1 = yc; c_kp1 = shifts; have_kp1 = true; }
        if (idx == k) { tap_k = yc; c_k = shifts; have_k = true; }
        if (k >= 1 && idx == k - 1) { tap_km1 = yc; c_km1 = shifts; have_km1 = true; }
        if (idx % 2 == 0) {
            long double coef = (idx == 0) ? 1.0L : 2.0L;
            s1 += coef * ldc(yc);
            s2 += coef * ((idx / 2) % 2 == 0 ? 1.0L : -1.0L) * ldc(yc);
        }
        double mag = std::max(std::fabs(yc.real()), std::fabs(yc.imag()));
        if (mag > rescale_hi) {
            yc /= rescale_hi;
            yp /= rescale_hi;
            s1 /= (long double)rescale_hi;
            s2 /= (long double)rescale_hi;
            ++shifts;
        }
    }

    bool use_cos = std::fabs(w.imag()) >= 3.0;
    ldc s = use_cos ? s2 : s1;
    scaled_cplx target = use_cos ? scaled_cos(w) : scaled_cplx::from({1.0, 0.0});
    cplx sd((double)s.real(), (double)s.imag());
    if (sd == cplx(0.0, 0.0) || !std::isfinite(std::abs(sd)))
        fail(errc::overflow, "bessel: normalization sum degenerate");

    auto finish = [&](cplx tap, long c_tap, bool have) -> scaled_cplx {
        if (!have) return scaled_cplx{{0.0, 0.0}, 0.0};
        scaled_cplx r = scaled_cplx::from(tap) / scaled_cplx::from(sd);
        r.log_scale -= rescale_log * (double)(shifts - c_tap);
        r = r * target;
        return r;
    };

    miller_taps out;
    out.jk = finish(tap_k, c_k, have_k);
    out.jkm1 = finish(tap_km1, c_km1, have_km1);
    out.jkp1 = finish(tap_kp1, c_kp1, have_kp1);
    return out;
}

} // namespace bessel_detail

// J_k(w) and J_k'(w) in scaled form, common machinery for both public entry
// points. Derivative via J_k' = J_{k-1} - (k/w) J_k (J_0' = -J_1).
inline bessel_scaled_eval bessel_j_scaled(unsigned order, cplx w) {
    using namespace bessel_detail;
    check_domain(order, w);

    if (w == cplx(0.0, 0.0)) {
        bessel_scaled_eval r;
        r.j = scaled_cplx::from({order == 0 ? 1.0 : 0.0, 0.0});
        r.jprime = scaled_cplx::from({order == 1 ? 0.5 : 0.0, 0.0});
        return r;
    }

    if (use_series(order, w)) {
        ldc wl((long double)w.real(), (long double)w.imag());
        ldc jk = series_j(order, wl);
        ldc jaux = (order == 0) ? series_j(1, wl) : series_j(order - 1, wl);
        ldc jp = (order == 0) ? -jaux : jaux - (long double)order / wl * jk;
        bessel_scaled_eval r;
        // long double magnitudes can exceed double range; fold into log_scale
        auto to_scaled = [](ldc v) {
            long double m = std::abs(v);
            if (m == 0.0L) return scaled_cplx{{0.0, 0.0}, 0.0};
            long double lm = std::log(m);
            ldc u = v / m;
            scaled_cplx s{{(double)u.real(), (double)u.imag()}, (double)lm};
            return s;
        };
        r.j = to_scaled(jk);
        r.jprime = to_scaled(jp);
        return r;
    }

    miller_taps taps = miller(order, w);
    bessel_scaled_eval r;
    r.j = taps.jk;
    if (order == 0) {
        r.jprime = scaled_cplx{-taps.jkp1.value, taps.jkp1.log_scale};
    } else {
        r.jprime = taps.jkm1 - r.j * scaled_cplx::from((double)order / w);
    }
    return r;
}

inline bessel_eval bessel_j_pair(unsigned order, cplx w) {
    bessel_scaled_eval s = bessel_j_scaled(order, w);
    bessel_eval r;
    r.order = order;
    r.argument = w;
    r.value_j = s.j.unscaled();
    r.value_jprime = s.jprime.unscaled();
    return r;
}

// Log-scaled value: J_order(w) = scaled_value * exp(log_scale).
inline std::pair<cplx, double> bessel_j_log_scaled(unsigned order, cplx w) {
    bessel_scaled_eval s = bessel_j_scaled(order, w);
    return {s.j.value, s.j.log_scale};
}

// J_k'(w)/J_k(w) from the backward-recurrence ratio; immune to the growth
// that makes plain values overflow. Throws dirichlet_pole on a J_k zero.
inline cplx bessel_jprime_over_j(unsigned order, cplx w) {
    bessel_scaled_eval s = bessel_j_scaled(order, w);
    if (s.j.is_zero()) fail(errc::dirichlet_pole, "bessel: J_k(w) = 0");
    scaled_cplx q = s.jprime / s.j;
    double la = q.log_abs();
    if (la > 500.0) fail(errc::dirichlet_pole, "bessel: J_k(w) ~ 0 (ratio overflow)");
    return q.unscaled();
}

} // namespace tevr
