#pragma once

// Exact, non-asymptotic reference model on the d = 2 disk with constant
// media: the branch-free transmission determinant per angular mode, exact
// per-mode DtN eigenvalues, and the DtN-vs-parametrix comparison.

#include <cmath>
#include <complex>
#include <vector>

#include "tevr/bessel.hpp"
#include "tevr/errors.hpp"
#include "tevr/parametrix.hpp"
#include "tevr/spectral.hpp"
#include "tevr/symbols.hpp"

namespace tevr {

struct disk_config {
    double radius = 1.0;
    double c1 = 1.0, n1 = 1.0, c2 = 1.0, n2 = 4.0;
};

inline void validate(const disk_config& cfg) {
    if (!(cfg.radius > 0 && cfg.c1 > 0 && cfg.n1 > 0 && cfg.c2 > 0 && cfg.n2 > 0))
        fail(errc::invalid_argument, "disk config: parameters must be positive");
    double a = cfg.c1 * cfg.n1, b = cfg.c2 * cfg.n2;
    if (std::fabs(a - b) <= 1e-12 * (a + b))
        fail(errc::condition_violated, "condition (1.2) fails: c1*n1 = c2*n2");
}

inline medium_pair media_of(const disk_config& cfg) {
    return medium_pair::constants(cfg.c1, cfg.n1, cfg.c2, cfg.n2);
}

// Branch-free normalized determinant
//   d~_k = [c1 w1 J_k'(w1 R) J_k(w2 R) - c2 w2 J_k'(w2 R) J_k(w1 R)] / (w1 w2)^k,
// w_j = sqrt(lambda n_j / c_j), entire in lambda. Returned in scaled form.
inline scaled_cplx transmission_det(unsigned k, cplx lambda, const disk_config& cfg) {
    validate(cfg);
    if (lambda == cplx(0.0, 0.0)) fail(errc::invalid_argument, "lambda = 0 excluded");
    if (std::abs(lambda) * cfg.radius * cfg.radius > 1e8)
        fail(errc::overflow, "transmission_det: |lambda| R^2 above supported range");
    cplx w1 = std::sqrt(lambda * cfg.n1 / cfg.c1);
    cplx w2 = std::sqrt(lambda * cfg.n2 / cfg.c2);
    auto b1 = bessel_j_scaled(k, w1 * cfg.radius);
    auto b2 = bessel_j_scaled(k, w2 * cfg.radius);
    scaled_cplx t1 = scaled_cplx::from(cfg.c1 * w1) * b1.jprime * b2.j;
    scaled_cplx t2 = scaled_cplx::from(cfg.c2 * w2) * b2.jprime * b1.j;
    scaled_cplx num = t1 - t2;
    // divide by (w1 w2)^k: log-magnitude into log_scale, phase into value
    double lw = (double)k * (std::log(std::abs(w1)) + std::log(std::abs(w2)));
    double aw = (double)k * (std::arg(w1) + std::arg(w2));
    num.log_scale -= lw;
    num.value *= std::polar(1.0, -aw);
    num.normalize();
    return num;
}

// Exact per-mode value of the boundary symbol T(z,h) = -ih d/dx1 at x1 = 0
// (x1 the distance to the boundary) for boundary data e^{i m theta}:
//   T(m) = i h w J'_|m|(w R) / J_|m|(w R), w = sqrt(z n / c) / h.
// At z = -1, c = n = 1 this is i I'_|m|(R/h)/I_|m|(R/h) -> rho as h -> 0.
inline cplx exact_dtn(int mode, const spectral_point& sp, double R, double c, double n) {
    // The formula is exact and needs no zone assumption; off Z it is defined
    // wherever J_|m|(wR) != 0 (dirichlet_pole is raised otherwise).
    if (!(sp.h > 0)) fail(errc::invalid_argument, "exact_dtn: h must be positive");
    if (!(R > 0 && c > 0 && n > 0)) fail(errc::invalid_argument, "exact_dtn: positive parameters required");
    unsigned k = (unsigned)std::abs(mode);
    cplx w = std::sqrt(sp.z * n / c) / sp.h;
    cplx ratio = bessel_jprime_over_j(k, w * R);
    return cplx(0.0, 1.0) * sp.h * w * ratio;
}

// Per-mode weighted DtN comparison report: the weight
// <xi_m> realizes the H^1 -> L^2 operator bound mode by mode.
struct dtn_compare_report {
    double max_weighted_error = 0.0;
    int argmax_mode = 0;
    std::vector<double> per_mode; // |m| = 0..M_max
};

// correction(xi) is the h-linear symbol paired with rho (empty = none).
inline dtn_compare_report dtn_compare(const spectral_point& sp, double R, double c, double n,
                                      unsigned M_max,
                                      const std::function<cplx(double)>& correction = {}) {
    validate(sp);
    dtn_compare_report rep;
    rep.per_mode.resize(M_max + 1);
    double m_coeff = n / c;
    for (unsigned m = 0; m <= M_max; ++m) {
        double xi = sp.h * (double)m / R;
        cplx T = exact_dtn((int)m, sp, R, c, n);
        cplx approx = rho(xi * xi, m_coeff, sp.z);
        if (correction) approx += sp.h * correction(xi);
        double err = std::sqrt(1.0 + xi * xi) * std::abs(T - approx);
        rep.per_mode[m] = err;
        if (err > rep.max_weighted_error) {
            rep.max_weighted_error = err;
            rep.argmax_mode = (int)m;
        }
    }
    return rep;
}

// Builds the first-order parametrix correction b_eff = -i a_{1,0} for one
// medium on the disk and returns it as a function of xi (cubic interpolation
// between transport-grid nodes).
struct dtn_correction {
    symbol_grid b;
    cplx operator()(double xi) const { return interp_xi(b, 0, xi); }
};

inline dtn_correction disk_dtn_correction(const spectral_point& sp, double R, double c, double n,
                                          double xi_max, unsigned nxi = 513, unsigned N = 4) {
    auto geom = boundary_geometry::disk(R);
    auto jet = disk_normal_jet(R, c, n, N, 16);
    auto ph = solve_eikonal(jet, sp, geom, uniform_xi_nodes(xi_max, nxi));
    auto am = solve_transport(jet, ph, [](double) { return 1.0; }, sp);
    return dtn_correction{dtn_first_correction(am)};
}

// Realness check at z = -1: the exact disk T is purely imaginary, so
// max over modes of |Re(c T(m))| is the strongest form of the bound.
inline double greens_identity_check(const spectral_point& sp, double R, double c, double n,
                                    unsigned M_max) {
    if (sp.z != cplx(-1.0, 0.0)) fail(errc::zone_mismatch, "greens identity check requires z = -1");
    double worst = 0.0;
    for (unsigned m = 0; m <= M_max; ++m) {
        cplx T = exact_dtn((int)m, sp, R, c, n);
        worst = std::max(worst, std::fabs(c * T.real()));
    }
    return worst;
}

} // namespace tevr
