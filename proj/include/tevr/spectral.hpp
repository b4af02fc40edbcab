#pragma once

// Spectral-point bookkeeping: the normalized contours Z1 (Re z = 1),
// Z2 (Re z = -1), Z3 (|Im z| = 1) and the (h, z) <-> lambda dictionary
// lambda = z / h^2.

#include <cmath>
#include <complex>
#include <functional>

#include "tevr/errors.hpp"
#include "tevr/scaled.hpp"

namespace tevr {

enum class zone { Z1, Z2, Z3 };

struct spectral_point {
    double h = 0.1;
    cplx z{-1.0, 0.0};
    zone zn = zone::Z2;
    double epsilon = 0.0; // margin for Z_{1,eps}: |Im z| >= h^(1/2-eps)
};

inline void validate(const spectral_point& sp) {
    constexpr double tol = 1e-12;
    if (!(sp.h > 0.0)) fail(errc::invalid_argument, "spectral point: h must be positive");
    double az = std::abs(sp.z);
    if (az < 1.0 - 1e-9 || az > 2.0 + 1e-9)
        fail(errc::invalid_argument, "spectral point: |z| outside [1,2]");
    if (!(sp.epsilon >= 0.0 && sp.epsilon < 0.5))
        fail(errc::invalid_argument, "spectral point: epsilon outside [0, 0.5)");
    switch (sp.zn) {
        case zone::Z1:
            if (std::fabs(sp.z.real() - 1.0) > tol || sp.z.imag() == 0.0 || std::fabs(sp.z.imag()) > 1.0 + tol)
                fail(errc::zone_mismatch, "z not on Z1");
            if (sp.epsilon > 0.0 && std::fabs(sp.z.imag()) < std::pow(sp.h, 0.5 - sp.epsilon))
                fail(errc::zone_mismatch, "z violates the Z1 epsilon margin");
            break;
        case zone::Z2:
            if (std::fabs(sp.z.real() + 1.0) > tol || std::fabs(sp.z.imag()) > 1.0 + tol)
                fail(errc::zone_mismatch, "z not on Z2");
            break;
        case zone::Z3:
            if (std::fabs(std::fabs(sp.z.imag()) - 1.0) > tol || std::fabs(sp.z.real()) > 1.0 + tol)
                fail(errc::zone_mismatch, "z not on Z3");
            break;
    }
}

inline spectral_point make_spectral_point(double h, cplx z, zone zn, double epsilon = 0.0) {
    spectral_point sp{h, z, zn, epsilon};
    validate(sp);
    return sp;
}

// Semiclassical normalization of a spectral parameter lambda != 0:
// h = |Re lambda|^{-1/2}, z = lambda/|Re lambda| when |Re| >= |Im|, else the
// imaginary-part analogue. z then lands on the unit-square contour.
inline spectral_point semiclassical_of_lambda(cplx lambda) {
    double ar = std::fabs(lambda.real()), ai = std::fabs(lambda.imag());
    if (ar == 0.0 && ai == 0.0) fail(errc::invalid_argument, "lambda = 0 excluded");
    spectral_point sp;
    if (ar >= ai) {
        sp.h = 1.0 / std::sqrt(ar);
        sp.z = lambda / ar;
        sp.zn = (lambda.real() > 0.0) ? zone::Z1 : zone::Z2;
    } else {
        sp.h = 1.0 / std::sqrt(ai);
        sp.z = lambda / ai;
        sp.zn = zone::Z3;
    }
    return sp;
}

// The two media on the boundary; coefficients may vary along arc length.
struct medium_pair {
    std::function<double(double)> c1, n1, c2, n2;

    static medium_pair constants(double c1v, double n1v, double c2v, double n2v) {
        if (!(c1v > 0 && n1v > 0 && c2v > 0 && n2v > 0))
            fail(errc::invalid_argument, "medium coefficients must be positive");
        medium_pair mp;
        mp.c1 = [c1v](double) { return c1v; };
        mp.n1 = [n1v](double) { return n1v; };
        mp.c2 = [c2v](double) { return c2v; };
        mp.n2 = [n2v](double) { return n2v; };
        return mp;
    }

    double m1(double x) const { return n1(x) / c1(x); }
    double m2(double x) const { return n2(x) / c2(x); }
};

// Boundary circle of a disk: arc-length coordinates, r0(x', xi') = xi'^2.
struct boundary_geometry {
    double circumference = 2.0 * M_PI;
    double curvature_radius = 1.0;

    static boundary_geometry disk(double radius) {
        if (!(radius > 0)) fail(errc::invalid_argument, "disk radius must be positive");
        return {2.0 * M_PI * radius, radius};
    }

    double r0(double /*x*/, double xi) const { return xi * xi; }
};

} // namespace tevr
