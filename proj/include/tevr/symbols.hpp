#pragma once

// Boundary symbols: the principal DtN symbol rho (upper-half-plane root of
// rho^2 + r0 - m z = 0), the transition cutoff chi, weighted symbol-class
// norms, the inversion symbol c1 rho1 - c2 rho2, and kappa = d/dz of it.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include "tevr/errors.hpp"
#include "tevr/grid.hpp"
#include "tevr/spectral.hpp"

namespace tevr {

inline cplx rho(double r0_val, double m_val, cplx z) {
    if (!(m_val > 0.0)) fail(errc::invalid_argument, "rho: m must be positive");
    if (!(r0_val >= 0.0)) fail(errc::invalid_argument, "rho: r0 must be nonnegative");
    cplx r = std::sqrt(m_val * z - cplx(r0_val, 0.0));
    if (r.imag() < 0.0) r = -r;
    if (!(r.imag() > 0.0))
        fail(errc::branch_failure, "rho: root is real; z is not in the admissible zones");
    return r;
}

inline cplx drho_dz(double r0_val, double m_val, cplx z) {
    return m_val / (2.0 * rho(r0_val, m_val, z));
}

// --- cutoff -----------------------------------------------------------------

namespace cutoff_detail {
inline double bump(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }
} // namespace cutoff_detail

// phi(sigma): 1 on |sigma| <= 1, 0 on |sigma| >= 2, smooth monotone partition
// in between, infinitely flat at both ends.
inline double cutoff_phi(double sigma) {
    double s = std::fabs(sigma);
    if (s <= 1.0) return 1.0;
    if (s >= 2.0) return 0.0;
    double a = cutoff_detail::bump(2.0 - s);
    double b = cutoff_detail::bump(s - 1.0);
    return a / (a + b);
}

inline double chi_cutoff(double r0_val, double delta0) {
    if (!(delta0 > 0.0)) fail(errc::invalid_argument, "chi: delta0 must be positive");
    return cutoff_phi(delta0 * r0_val);
}

// 0 < 2 delta0 <= min 1/(gamma m) with margin.
inline double default_delta0(const medium_pair& mp, const boundary_geometry& geom, unsigned samples = 256) {
    double mmax = 0.0;
    for (unsigned i = 0; i < samples; ++i) {
        double x = geom.circumference * (double)i / (double)samples;
        mmax = std::max(mmax, std::max(mp.m1(x), mp.m2(x)));
    }
    return 0.4 / mmax;
}

struct grid_spec {
    unsigned nx = 256;
    unsigned nxi = 513;
    double xi_max = 4.0;
};

inline grid_spec default_grid_spec(const medium_pair& mp, const boundary_geometry& geom) {
    grid_spec gs;
    double mmax = 0.0;
    for (unsigned i = 0; i < 256; ++i) {
        double x = geom.circumference * (double)i / 256.0;
        mmax = std::max(mmax, std::max(mp.m1(x), mp.m2(x)));
    }
    gs.xi_max = 4.0 * std::max(std::sqrt(2.0 * mmax), 1.0);
    return gs;
}

// --- symbol-class norms ------------------------------------------------------

struct class_estimate {
    double ell = 0.0;
    double delta1 = 0.0, delta2 = 0.0;
    symbol_grid mu; // positive weight, e.g. |rho|
    unsigned max_order = 2;
    double norm = 0.0;
};

// sup over the grid of |d_x^a d_xi^b s| * mu^{-ell + d1 a + d2 b}, maximized
// over a+b <= max_order. xi-differentiation shrinks the valid window by two
// nodes per order.
inline double class_norm(const symbol_grid& a, class_estimate& est) {
    if (est.max_order > 4) fail(errc::invalid_argument, "class_norm: max_order above the FD noise floor");
    if (a.values.size() != est.mu.values.size())
        fail(errc::invalid_argument, "class_norm: weight grid mismatch");
    double best = 0.0;
    symbol_grid dx_base = a;
    for (unsigned alpha = 0; alpha <= est.max_order; ++alpha) {
        if (alpha > 0) dx_base = deriv_x(dx_base);
        symbol_grid cur = dx_base;
        for (unsigned beta = 0; alpha + beta <= est.max_order; ++beta) {
            if (beta > 0) cur = deriv_xi(cur);
            unsigned margin = 2 * beta;
            double expo = -est.ell + est.delta1 * (double)alpha + est.delta2 * (double)beta;
            for (unsigned ix = 0; ix < a.nx; ++ix)
                for (unsigned ixi = margin; ixi + margin < a.nxi(); ++ixi) {
                    double w = std::pow(std::abs(est.mu.at(ix, ixi)), expo);
                    best = std::max(best, std::abs(cur.at(ix, ixi)) * w);
                }
        }
    }
    est.norm = best;
    return best;
}

// Refinement stability: recompute on a 2x grid; > 10% drift means the grid
// cannot resolve the symbol.
struct class_norm_check {
    double coarse = 0.0, fine = 0.0;
    double drift = 0.0;
};

template <class SymbolFactory, class WeightFactory>
class_norm_check class_norm_refinement(SymbolFactory&& make_symbol, WeightFactory&& make_weight,
                                       double ell, double delta1, double delta2, unsigned max_order,
                                       unsigned nx, unsigned nxi) {
    auto eval = [&](unsigned px, unsigned pxi) {
        class_estimate est;
        est.ell = ell;
        est.delta1 = delta1;
        est.delta2 = delta2;
        est.max_order = max_order;
        est.mu = make_weight(px, pxi);
        symbol_grid a = make_symbol(px, pxi);
        return class_norm(a, est);
    };
    class_norm_check chk;
    chk.coarse = eval(nx, nxi);
    chk.fine = eval(2 * nx, 2 * nxi + 1);
    chk.drift = std::fabs(chk.fine - chk.coarse) / std::max(1e-300, std::max(chk.coarse, chk.fine));
    if (chk.drift >= 0.10) fail(errc::grid_too_coarse, "class norm unstable under grid refinement");
    return chk;
}

// --- derived boundary symbols -------------------------------------------------

inline void require_condition_1_2(const medium_pair& mp, const boundary_geometry& geom, unsigned nx) {
    for (unsigned ix = 0; ix < nx; ++ix) {
        double x = geom.circumference * (double)ix / (double)nx;
        double a = mp.c1(x) * mp.n1(x), b = mp.c2(x) * mp.n2(x);
        if (std::fabs(a - b) <= 1e-12 * (std::fabs(a) + std::fabs(b)))
            fail(errc::condition_violated, "condition (1.2) fails: c1*n1 = c2*n2 on the boundary");
    }
}

// c1 rho1 - c2 rho2 on the grid.
inline symbol_grid inversion_symbol(const medium_pair& mp, const spectral_point& sp,
                                    const boundary_geometry& geom, unsigned nx,
                                    std::vector<double> xi_nodes) {
    validate(sp);
    require_condition_1_2(mp, geom, nx);
    return make_symbol_grid(geom.circumference, nx, std::move(xi_nodes), [&](double x, double xi) {
        double r0v = geom.r0(x, xi);
        return mp.c1(x) * rho(r0v, mp.m1(x), sp.z) - mp.c2(x) * rho(r0v, mp.m2(x), sp.z);
    });
}

// kappa = c1 d(rho1)/dz - c2 d(rho2)/dz = n1/(2 rho1) - n2/(2 rho2).
inline symbol_grid kappa(const medium_pair& mp, const spectral_point& sp,
                         const boundary_geometry& geom, unsigned nx, std::vector<double> xi_nodes) {
    validate(sp);
    if (sp.zn != zone::Z2) fail(errc::zone_mismatch, "kappa is defined on Z2");
    return make_symbol_grid(geom.circumference, nx, std::move(xi_nodes), [&](double x, double xi) {
        double r0v = geom.r0(x, xi);
        return mp.n1(x) / (2.0 * rho(r0v, mp.m1(x), sp.z)) - mp.n2(x) / (2.0 * rho(r0v, mp.m2(x), sp.z));
    });
}

inline cplx dkappa_dz_closed_form(const medium_pair& mp, double x, double r0v, cplx z) {
    cplx r1 = rho(r0v, mp.m1(x), z), r2 = rho(r0v, mp.m2(x), z);
    double n1 = mp.n1(x), n2 = mp.n2(x), c1 = mp.c1(x), c2 = mp.c2(x);
    return -n1 * n1 / (4.0 * c1 * r1 * r1 * r1) + n2 * n2 / (4.0 * c2 * r2 * r2 * r2);
}

// --- numeric bounds report for rho ------------------------------------------------

struct rho_bounds_report {
    // min over the sample of 2 Im(rho) |rho| / |Im z|  (Z1/Z3)
    double min_product_ratio = std::numeric_limits<double>::quiet_NaN();
    // fitted C = min |rho| / sqrt(|Im z|)               (Z1/Z3)
    double fitted_lower_vs_sqrt_imz = std::numeric_limits<double>::quiet_NaN();
    // chain C~ sqrt(r0+1) >= 2 Im rho >= |rho| >= C sqrt(r0+1)
    double fitted_lower_vs_sqrt_r0 = std::numeric_limits<double>::quiet_NaN();
    double fitted_upper_vs_sqrt_r0 = std::numeric_limits<double>::quiet_NaN();
    double min_chain_gap = std::numeric_limits<double>::quiet_NaN(); // min (2 Im rho - |rho|)
    unsigned samples_product = 0, samples_chain = 0;
    bool pass_product_bound = false, pass_chain = false;
};

inline rho_bounds_report check_rho_bounds(const spectral_point& sp, const boundary_geometry& geom,
                                    const std::function<double(double)>& m, unsigned nx = 128,
                                    unsigned nxi = 129, double xi_max = 8.0) {
    validate(sp);
    rho_bounds_report rep;
    const bool z1z3 = sp.zn != zone::Z2;
    double min32 = std::numeric_limits<double>::infinity();
    double min33 = min32, min34 = min32, gap34 = min32;
    double max34 = 0.0;
    for (unsigned ix = 0; ix < nx; ++ix) {
        double x = geom.circumference * (double)ix / (double)nx;
        double mv = m(x);
        for (unsigned ixi = 0; ixi < nxi; ++ixi) {
            double xi = -xi_max + 2.0 * xi_max * (double)ixi / (double)(nxi - 1);
            double r0v = geom.r0(x, xi);
            cplx r = rho(r0v, mv, sp.z);
            double ar = std::abs(r), ir = r.imag();
            if (z1z3) {
                min32 = std::min(min32, 2.0 * ir * ar / std::fabs(sp.z.imag()));
                min33 = std::min(min33, ar / std::sqrt(std::fabs(sp.z.imag())));
                ++rep.samples_product;
            }
            bool in_34_domain = (sp.zn == zone::Z2) || (r0v >= 2.0 * mv);
            if (in_34_domain) {
                double s = std::sqrt(r0v + 1.0);
                min34 = std::min(min34, ar / s);
                max34 = std::max(max34, 2.0 * ir / s);
                gap34 = std::min(gap34, 2.0 * ir - ar);
                ++rep.samples_chain;
            }
        }
    }
    if (z1z3) {
        rep.min_product_ratio = min32;
        rep.fitted_lower_vs_sqrt_imz = min33;
        rep.pass_product_bound = min32 >= 1.0 - 1e-12;
    }
    if (rep.samples_chain > 0) {
        rep.fitted_lower_vs_sqrt_r0 = min34;
        rep.fitted_upper_vs_sqrt_r0 = max34;
        rep.min_chain_gap = gap34;
        rep.pass_chain = (min34 > 0.0) && (gap34 >= -1e-12 * max34);
    }
    return rep;
}

// The product and sqrt(|Im z|) lower bounds hold on Z1 and Z3 only.
inline rho_bounds_report check_rho_bounds_z1z3(const spectral_point& sp, const boundary_geometry& geom,
                                         const std::function<double(double)>& m, unsigned nx = 128,
                                         unsigned nxi = 129, double xi_max = 8.0) {
    if (sp.zn == zone::Z2) fail(errc::zone_mismatch, "the Im(rho)|rho| and sqrt(|Im z|) bounds hold on Z1 and Z3 only");
    return check_rho_bounds(sp, geom, m, nx, nxi, xi_max);
}

} // namespace tevr
