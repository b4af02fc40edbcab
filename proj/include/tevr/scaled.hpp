#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "tevr/errors.hpp"

namespace tevr {

using cplx = std::complex<double>;

// Complex value in the form value * exp(log_scale). Used wherever Bessel
// growth exceeds the double exponent range (Im(w)*R large).
struct scaled_cplx {
    cplx value{0.0, 0.0};
    double log_scale = 0.0;

    static scaled_cplx from(cplx v) {
        scaled_cplx s{v, 0.0};
        s.normalize();
        return s;
    }

    bool is_zero() const { return value == cplx(0.0, 0.0); }

    // Pull |value| into [1e-2, 1e2] by moving magnitude into log_scale.
    void normalize() {
        double m = std::abs(value);
        if (m == 0.0 || !std::isfinite(m)) return;
        if (m < 1e-2 || m > 1e2) {
            log_scale += std::log(m);
            value /= m;
        }
    }

    double log_abs() const {
        double m = std::abs(value);
        if (m == 0.0) return -std::numeric_limits<double>::infinity();
        return std::log(m) + log_scale;
    }

    // Reconstruct the plain complex value; errc::overflow if out of range.
    cplx unscaled() const {
        if (is_zero()) return {0.0, 0.0};
        double la = log_abs();
        if (la > 700.0) fail(errc::overflow, "scaled value exceeds double range; use the scaled variant");
        if (la < -745.0) return {0.0, 0.0};
        return value * std::exp(log_scale);
    }

    friend scaled_cplx operator*(const scaled_cplx& a, const scaled_cplx& b) {
        scaled_cplx r{a.value * b.value, a.log_scale + b.log_scale};
        r.normalize();
        return r;
    }
    friend scaled_cplx operator*(const scaled_cplx& a, cplx b) { return a * from(b); }
    friend scaled_cplx operator/(const scaled_cplx& a, const scaled_cplx& b) {
        scaled_cplx r{a.value / b.value, a.log_scale - b.log_scale};
        r.normalize();
        return r;
    }

    // Addition pulls both terms to the larger scale.
    friend scaled_cplx operator+(const scaled_cplx& a, const scaled_cplx& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        const scaled_cplx& big = (a.log_scale >= b.log_scale) ? a : b;
        const scaled_cplx& small = (a.log_scale >= b.log_scale) ? b : a;
        double shift = small.log_scale - big.log_scale;
        cplx v = big.value + small.value * std::exp(shift);
        scaled_cplx r{v, big.log_scale};
        r.normalize();
        return r;
    }
    friend scaled_cplx operator-(const scaled_cplx& a, const scaled_cplx& b) {
        return a + scaled_cplx{-b.value, b.log_scale};
    }
};

} // namespace tevr
