#pragma once

// Boundary parametrix machinery: jets of the operator coefficients in the
// normal coordinate x1, the eikonal recursion for the phase, the transport
// recursions for the amplitude, the boundary symbol tau, and direct residual
// evaluators used to certify the construction against the actual operator.
//
// The transport recursion carries the phase-Laplacian terms
// -i(d^2_{x1} phi + R d^2_{x'} phi) a that conjugation of D^2 produces; with
// them the first amplitude correction reproduces the exact disk amplitude
// (1 - x1/R)^{-1/2} and the modified-Bessel DtN expansion order by order.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "tevr/errors.hpp"
#include "tevr/grid.hpp"
#include "tevr/spectral.hpp"
#include "tevr/symbols.hpp"

namespace tevr {

// Exact coefficient functions of (x1, x') for the operator
// D1^2 + R(x) D'^2 - z m(x) + h q(x,D) + h^2 qt(x), q = qs*xi1 + qf*xi'.
struct normal_model {
    std::function<double(double, double)> metric;
    std::function<double(double, double)> mass;
    std::function<cplx(double, double)> q_sharp;
    std::function<cplx(double, double)> q_flat;
    std::function<cplx(double, double)> q_tilde;
};

// Disk of radius R with constant (c, n): R(x) = (1 - x1/R)^{-2},
// m = n/c, q = i/(R - x1) * xi1 (from the radial first-order term).
inline normal_model disk_normal_model(double R, double c, double n) {
    if (!(R > 0 && c > 0 && n > 0)) fail(errc::invalid_argument, "disk model needs positive parameters");
    normal_model md;
    md.metric = [R](double x1, double) { double t = 1.0 - x1 / R; return 1.0 / (t * t); };
    md.mass = [c, n](double, double) { return n / c; };
    md.q_sharp = [R](double x1, double) { return cplx(0.0, 1.0 / (R - x1)); };
    md.q_flat = [](double, double) { return cplx(0.0, 0.0); };
    md.q_tilde = [](double, double) { return cplx(0.0, 0.0); };
    return md;
}

// Taylor coefficients in x1 of the model, per boundary node.
struct normal_jet {
    unsigned order = 4; // residual order N
    double circumference = 2.0 * M_PI;
    unsigned nx = 64;
    std::vector<std::vector<double>> metric_coeffs;  // [l][ix], l = 0..N-1
    std::vector<std::vector<double>> mass_coeffs;    // [k][ix]
    std::vector<std::vector<cplx>> q_sharp_coeffs;   // [l][ix]
    std::vector<std::vector<cplx>> q_flat_coeffs;    // [l][ix], coefficient of xi'
    std::vector<std::vector<cplx>> q_tilde_coeffs;   // [l][ix]

    double x_node(unsigned ix) const { return circumference * (double)ix / (double)nx; }
};

inline normal_jet disk_normal_jet(double R, double c, double n, unsigned N, unsigned nx = 64) {
    if (N > 8) fail(errc::invalid_argument, "jet order above supported range");
    normal_jet jet;
    jet.order = N;
    jet.circumference = 2.0 * M_PI * R;
    jet.nx = nx;
    jet.metric_coeffs.assign(N, std::vector<double>(nx));
    jet.mass_coeffs.assign(N, std::vector<double>(nx));
    jet.q_sharp_coeffs.assign(N, std::vector<cplx>(nx));
    jet.q_flat_coeffs.assign(N, std::vector<cplx>(nx, {0.0, 0.0}));
    jet.q_tilde_coeffs.assign(N, std::vector<cplx>(nx, {0.0, 0.0}));
    for (unsigned l = 0; l < N; ++l) {
        double rl = (double)(l + 1) / std::pow(R, (double)l);       // (1-x1/R)^{-2}
        cplx ql{0.0, 1.0 / std::pow(R, (double)l + 1.0)};           // i/(R-x1)
        for (unsigned ix = 0; ix < nx; ++ix) {
            jet.metric_coeffs[l][ix] = rl;
            jet.mass_coeffs[l][ix] = (l == 0) ? n / c : 0.0;
            jet.q_sharp_coeffs[l][ix] = ql;
        }
    }
    return jet;
}

// Phase jet: phi = -<x'-y', xi'> + sum_{k=1..N} x1^k phi_k. Only the
// derivative grad phi_0 = xi' of the linear part enters the recursions.
struct phase_jet {
    unsigned order = 4;                  // N: the eikonal defect is O(x1^N)
    std::vector<symbol_grid> phi;        // phi[k-1] = phi_k, k = 1..N
    std::vector<symbol_grid> dphi;       // spectral x'-derivatives
    std::vector<symbol_grid> d2phi;

    const symbol_grid& rho_grid() const { return phi[0]; }
};

// Amplitude jet: a = sum_{k=0..N} sum_{j=0..N-1} x1^k h^j a_{k,j}.
struct amplitude_jet {
    unsigned order = 4;
    std::vector<std::vector<symbol_grid>> a;   // a[k][j]
    std::vector<std::vector<symbol_grid>> da;  // x'-derivatives
    std::vector<std::vector<symbol_grid>> d2a;
};

namespace parametrix_detail {

inline symbol_grid zero_like(const symbol_grid& g) {
    symbol_grid z = g;
    for (auto& v : z.values) v = cplx(0.0, 0.0);
    return z;
}

} // namespace parametrix_detail

// Eikonal recursion (coefficient form of (d1 phi)^2 + r(x, grad phi) = z m):
// solved for K = 0..N-1, so the residual against the full coefficients is
// O(x1^N).
inline phase_jet solve_eikonal(const normal_jet& jet, const spectral_point& sp,
                               const boundary_geometry& geom, std::vector<double> xi_nodes) {
    validate(sp);
    const unsigned N = jet.order;
    phase_jet ph;
    ph.order = N;
    ph.phi.reserve(N);

    symbol_grid rho_g = make_symbol_grid(jet.circumference, jet.nx, xi_nodes, [&](double, double) {
        return cplx(0.0, 0.0);
    });
    double min_rho = 1e300;
    for (unsigned ix = 0; ix < jet.nx; ++ix)
        for (unsigned ixi = 0; ixi < rho_g.nxi(); ++ixi) {
            cplx r = rho(geom.r0(rho_g.x_node(ix), rho_g.xi_nodes[ixi]), jet.mass_coeffs[0][ix], sp.z);
            rho_g.at(ix, ixi) = r;
            min_rho = std::min(min_rho, std::abs(r));
        }
    if (min_rho < 1e-12) fail(errc::degenerate_rho, "eikonal: rho degenerate on the grid");

    ph.phi.push_back(rho_g);
    ph.dphi.push_back(deriv_x(rho_g));
    ph.d2phi.push_back(deriv_x(ph.dphi[0]));

    // grad phi_k tables, with grad phi_0 = xi'
    auto grad = [&](unsigned k, unsigned ix, unsigned ixi) -> cplx {
        if (k == 0) return cplx(rho_g.xi_nodes[ixi], 0.0);
        return ph.dphi[k - 1].at(ix, ixi);
    };

    for (unsigned K = 1; K <= N - 1; ++K) {
        symbol_grid next = parametrix_detail::zero_like(rho_g);
        for (unsigned ix = 0; ix < jet.nx; ++ix) {
            for (unsigned ixi = 0; ixi < rho_g.nxi(); ++ixi) {
                cplx acc(0.0, 0.0);
                for (unsigned k = 1; k + 1 <= K; ++k) {
                    unsigned j = K - k;
                    acc += (double)((k + 1) * (j + 1)) * ph.phi[k].at(ix, ixi) * ph.phi[j].at(ix, ixi);
                }
                for (unsigned l = 0; l <= K && l < N; ++l)
                    for (unsigned k = 0; k + l <= K; ++k) {
                        unsigned j = K - l - k;
                        acc += jet.metric_coeffs[l][ix] * grad(k, ix, ixi) * grad(j, ix, ixi);
                    }
                if (K < N) acc -= sp.z * jet.mass_coeffs[K][ix];
                next.at(ix, ixi) = -acc / (2.0 * (double)(K + 1) * rho_g.at(ix, ixi));
            }
        }
        ph.phi.push_back(next);
        ph.dphi.push_back(deriv_x(next));
        ph.d2phi.push_back(deriv_x(ph.dphi.back()));
    }
    return ph;
}

// Transport recursions, levels j = 0..N-1, orders K = 0..N-1 (a_{k,j} up to
// k = N), including the phase-Laplacian terms.
inline amplitude_jet solve_transport(const normal_jet& jet, const phase_jet& ph,
                                     const std::function<double(double)>& psi,
                                     const spectral_point& sp) {
    validate(sp);
    const unsigned N = jet.order;
    if (ph.order != N) fail(errc::invalid_argument, "transport: phase jet order mismatch");
    const symbol_grid& rho_g = ph.rho_grid();
    const unsigned nx = rho_g.nx, nxi = rho_g.nxi();

    amplitude_jet am;
    am.order = N;
    am.a.assign(N + 1, std::vector<symbol_grid>(N, parametrix_detail::zero_like(rho_g)));
    am.da = am.a;
    am.d2a = am.a;

    symbol_grid psi_g = parametrix_detail::zero_like(rho_g);
    for (unsigned ix = 0; ix < nx; ++ix) {
        cplx v(psi(rho_g.x_node(ix)), 0.0);
        for (unsigned ixi = 0; ixi < nxi; ++ixi) psi_g.at(ix, ixi) = v;
    }
    am.a[0][0] = psi_g;
    am.da[0][0] = deriv_x(psi_g);
    am.d2a[0][0] = deriv_x(am.da[0][0]);

    auto gphi = [&](unsigned k, unsigned ix, unsigned ixi) -> cplx {
        if (k == 0) return cplx(rho_g.xi_nodes[ixi], 0.0);
        return ph.dphi[k - 1].at(ix, ixi);
    };
    auto phi_at = [&](unsigned k) -> const symbol_grid& { return ph.phi[k - 1]; };

    const cplx I(0.0, 1.0);
    for (unsigned j = 0; j < N; ++j) {
        for (unsigned K = 0; K <= N - 1; ++K) {
            symbol_grid next = parametrix_detail::zero_like(rho_g);
            for (unsigned ix = 0; ix < nx; ++ix) {
                double x = rho_g.x_node(ix);
                for (unsigned ixi = 0; ixi < nxi; ++ixi) {
                    cplx acc(0.0, 0.0);
                    // -2i sum_{nu+k=K, nu>=1} (nu+1)(k+1) phi_{nu+1} a_{k+1,j}
                    for (unsigned nu = 1; nu <= K; ++nu) {
                        unsigned k = K - nu;
                        acc += -2.0 * I * (double)((nu + 1) * (k + 1)) * phi_at(nu + 1).at(ix, ixi) *
                               am.a[k + 1][j].at(ix, ixi);
                    }
                    // -2i sum_{l+nu+k=K} R_l grad(phi_nu) d(a_{k,j})
                    for (unsigned l = 0; l <= K && l < N; ++l)
                        for (unsigned nu = 0; nu + l <= K; ++nu) {
                            unsigned k = K - l - nu;
                            acc += -2.0 * I * jet.metric_coeffs[l][ix] * gphi(nu, ix, ixi) *
                                   am.da[k][j].at(ix, ixi);
                        }
                    // -i sum_{nu+k=K, nu+2<=N} (nu+2)(nu+1) phi_{nu+2} a_{k,j}
                    for (unsigned nu = 0; nu <= K; ++nu) {
                        if (nu + 2 > N) continue;
                        unsigned k = K - nu;
                        acc += -I * (double)((nu + 2) * (nu + 1)) * phi_at(nu + 2).at(ix, ixi) *
                               am.a[k][j].at(ix, ixi);
                    }
                    // -i sum_{l+nu+k=K, nu>=1} R_l (d2 phi_nu) a_{k,j}
                    for (unsigned l = 0; l <= K && l < N; ++l)
                        for (unsigned nu = 1; nu + l <= K; ++nu) {
                            unsigned k = K - l - nu;
                            acc += -I * jet.metric_coeffs[l][ix] * ph.d2phi[nu - 1].at(ix, ixi) *
                                   am.a[k][j].at(ix, ixi);
                        }
                    // + sum_{l+nu+k=K} ((nu+1) qs_l phi_{nu+1} + qf_l grad(phi_nu)) a_{k,j}
                    for (unsigned l = 0; l <= K && l < N; ++l)
                        for (unsigned nu = 0; nu + l <= K; ++nu) {
                            unsigned k = K - l - nu;
                            cplx qterm = (double)(nu + 1) * jet.q_sharp_coeffs[l][ix] *
                                         phi_at(nu + 1).at(ix, ixi);
                            qterm += jet.q_flat_coeffs[l][ix] * gphi(nu, ix, ixi);
                            acc += qterm * am.a[k][j].at(ix, ixi);
                        }
                    // right-hand side from level j-1
                    cplx rhs(0.0, 0.0);
                    if (j >= 1) {
                        if (K + 2 <= N) rhs += (double)((K + 2) * (K + 1)) * am.a[K + 2][j - 1].at(ix, ixi);
                        for (unsigned l = 0; l <= K && l < N; ++l) {
                            unsigned k = K - l;
                            rhs += jet.metric_coeffs[l][ix] * am.d2a[k][j - 1].at(ix, ixi);
                            if (k + 1 <= N)
                                rhs += (double)(k + 1) * I * jet.q_sharp_coeffs[l][ix] *
                                       am.a[k + 1][j - 1].at(ix, ixi);
                            rhs += I * jet.q_flat_coeffs[l][ix] * am.da[k][j - 1].at(ix, ixi);
                            rhs -= jet.q_tilde_coeffs[l][ix] * am.a[k][j - 1].at(ix, ixi);
                        }
                    }
                    next.at(ix, ixi) =
                        (rhs - acc) / (-2.0 * I * (double)(K + 1) * rho_g.at(ix, ixi));
                    (void)x;
                }
            }
            am.a[K + 1][j] = next;
            am.da[K + 1][j] = deriv_x(next);
            am.d2a[K + 1][j] = deriv_x(am.da[K + 1][j]);
        }
    }
    return am;
}

// tau = psi rho - i h sum_j h^j a_{1,j}: the boundary symbol of -ih d/dx1 of
// the parametrix at x1 = 0.
inline symbol_grid boundary_symbol_tau(const amplitude_jet& am, const phase_jet& ph,
                                       const spectral_point& sp) {
    const symbol_grid& rho_g = ph.rho_grid();
    symbol_grid tau = parametrix_detail::zero_like(rho_g);
    const cplx I(0.0, 1.0);
    for (unsigned ix = 0; ix < rho_g.nx; ++ix)
        for (unsigned ixi = 0; ixi < rho_g.nxi(); ++ixi) {
            cplx corr(0.0, 0.0);
            double hj = 1.0;
            for (unsigned j = 0; j < am.order; ++j) {
                corr += hj * am.a[1][j].at(ix, ixi);
                hj *= sp.h;
            }
            cplx psi_v = am.a[0][0].at(ix, ixi);
            tau.at(ix, ixi) = psi_v * rho_g.at(ix, ixi) - I * sp.h * corr;
        }
    return tau;
}

// First-order DtN correction from the transport solution: tau = rho + h*b + O(h^2)
// with b = -i a_{1,0}. This is the correction dtn_compare pairs with rho.
inline symbol_grid dtn_first_correction(const amplitude_jet& am) {
    symbol_grid b = am.a[1][0];
    for (auto& v : b.values) v *= cplx(0.0, -1.0);
    return b;
}

// The h,z,n-independent part of the first-order boundary symbol:
// b_psi = -(i/2)(1-chi) psi q(0,x',1,xi'/sqrt(r0)) - (1/2)(1-chi) <R0 xi'/sqrt(r0), grad psi>.
inline symbol_grid boundary_correction_symbol(const normal_jet& jet, const boundary_geometry& geom,
                             const std::function<double(double)>& psi, double delta0,
                             std::vector<double> xi_nodes) {
    const cplx I(0.0, 1.0);
    symbol_grid psi_g = make_symbol_grid(jet.circumference, jet.nx, xi_nodes,
                                         [&](double x, double) { return cplx(psi(x), 0.0); });
    symbol_grid dpsi = deriv_x(psi_g);
    symbol_grid b = psi_g;
    for (unsigned ix = 0; ix < b.nx; ++ix) {
        double x = b.x_node(ix);
        for (unsigned ixi = 0; ixi < b.nxi(); ++ixi) {
            double xi = b.xi_nodes[ixi];
            double r0v = geom.r0(x, xi);
            double one_minus_chi = 1.0 - chi_cutoff(r0v, delta0);
            if (one_minus_chi == 0.0) {
                b.at(ix, ixi) = cplx(0.0, 0.0);
                continue;
            }
            double sr = std::sqrt(r0v);
            cplx q_val = jet.q_sharp_coeffs[0][ix] + jet.q_flat_coeffs[0][ix] * (xi / sr);
            cplx val = -0.5 * I * one_minus_chi * psi_g.at(ix, ixi) * q_val -
                       0.5 * one_minus_chi * jet.metric_coeffs[0][ix] * (xi / sr) * dpsi.at(ix, ixi);
            b.at(ix, ixi) = val;
        }
    }
    return b;
}

// --- direct residual evaluation against the exact model -------------------------

struct jet_point_eval {
    cplx phase, dphase_dx1, d2phase_dx1, grad_phase, grad2_phase;
    cplx amp, damp_dx1, d2amp_dx1, grad_amp, grad2_amp;
};

inline jet_point_eval eval_jets(const phase_jet& ph, const amplitude_jet& am, double x1, double h,
                                unsigned ix, unsigned ixi) {
    jet_point_eval e{};
    const unsigned N = ph.order;
    // powers x1^p, p = 0..N
    std::vector<double> xp(N + 1, 1.0);
    for (unsigned p = 1; p <= N; ++p) xp[p] = xp[p - 1] * x1;

    e.grad_phase = cplx(ph.rho_grid().xi_nodes[ixi], 0.0);
    for (unsigned k = 1; k <= N; ++k) {
        cplx p = ph.phi[k - 1].at(ix, ixi);
        e.phase += xp[k] * p;
        e.dphase_dx1 += (double)k * xp[k - 1] * p;
        if (k >= 2) e.d2phase_dx1 += (double)(k * (k - 1)) * xp[k - 2] * p;
        e.grad_phase += xp[k] * ph.dphi[k - 1].at(ix, ixi);
        e.grad2_phase += xp[k] * ph.d2phi[k - 1].at(ix, ixi);
    }

    double hj = 1.0;
    for (unsigned j = 0; j < am.order; ++j) {
        for (unsigned k = 0; k <= am.order; ++k) {
            cplx c = am.a[k][j].at(ix, ixi) * hj;
            e.amp += xp[k] * c;
            if (k >= 1) e.damp_dx1 += (double)k * xp[k - 1] * c;
            if (k >= 2) e.d2amp_dx1 += (double)(k * (k - 1)) * xp[k - 2] * c;
            e.grad_amp += xp[k] * am.da[k][j].at(ix, ixi) * hj;
            e.grad2_amp += xp[k] * am.d2a[k][j].at(ix, ixi) * hj;
        }
        hj *= h;
    }
    return e;
}

// Eikonal defect (d1 phi)^2 + R(x)(grad phi)^2 - z m(x) at one node.
inline cplx eikonal_residual(const normal_model& md, const phase_jet& ph, const amplitude_jet& am,
                             const spectral_point& sp, double x1, unsigned ix, unsigned ixi) {
    jet_point_eval e = eval_jets(ph, am, x1, sp.h, ix, ixi);
    double x = ph.rho_grid().x_node(ix);
    return e.dphase_dx1 * e.dphase_dx1 + md.metric(x1, x) * e.grad_phase * e.grad_phase -
           sp.z * md.mass(x1, x);
}

// Conjugated-operator residual e^{-i phi/h} P e^{i phi/h} a at one node.
inline cplx transport_residual(const normal_model& md, const phase_jet& ph, const amplitude_jet& am,
                               const spectral_point& sp, double x1, unsigned ix, unsigned ixi) {
    const cplx I(0.0, 1.0);
    jet_point_eval e = eval_jets(ph, am, x1, sp.h, ix, ixi);
    double x = ph.rho_grid().x_node(ix);
    double R = md.metric(x1, x);
    cplx qs = md.q_sharp(x1, x), qf = md.q_flat(x1, x), qt = md.q_tilde(x1, x);
    cplx eik = e.dphase_dx1 * e.dphase_dx1 + R * e.grad_phase * e.grad_phase - sp.z * md.mass(x1, x);

    cplx h1 = -2.0 * I * e.dphase_dx1 * e.damp_dx1 - 2.0 * I * R * e.grad_phase * e.grad_amp -
              I * (e.d2phase_dx1 + R * e.grad2_phase) * e.amp +
              (qs * e.dphase_dx1 + qf * e.grad_phase) * e.amp;
    cplx h2 = -e.d2amp_dx1 - R * e.grad2_amp - I * (qs * e.damp_dx1 + qf * e.grad_amp) + qt * e.amp;
    return eik * e.amp + sp.h * h1 + sp.h * sp.h * h2;
}

struct residual_report {
    std::vector<double> x1;
    std::vector<double> eikonal_ratio;   // max over nodes of |E| / x1^N
    std::vector<double> transport_ratio; // max over nodes of |Qa| / x1^N
};

inline residual_report residual_ratios(const normal_model& md, const phase_jet& ph,
                                       const amplitude_jet& am, const spectral_point& sp,
                                       const std::vector<double>& x1_samples) {
    residual_report rep;
    const symbol_grid& g = ph.rho_grid();
    const unsigned N = ph.order;
    for (double x1 : x1_samples) {
        double we = 0.0, wt = 0.0;
        for (unsigned ix = 0; ix < g.nx; ++ix)
            for (unsigned ixi = 0; ixi < g.nxi(); ++ixi) {
                we = std::max(we, std::abs(eikonal_residual(md, ph, am, sp, x1, ix, ixi)));
                wt = std::max(wt, std::abs(transport_residual(md, ph, am, sp, x1, ix, ixi)));
            }
        double xn = std::pow(x1, (double)N);
        rep.x1.push_back(x1);
        rep.eikonal_ratio.push_back(we / xn);
        rep.transport_ratio.push_back(wt / xn);
    }
    return rep;
}

// --- phase lower bound ------------------------------------------------------------

inline bool phase_bound_holds(const phase_jet& ph, double delta, unsigned x1_samples = 48) {
    const symbol_grid& g = ph.rho_grid();
    for (unsigned ix = 0; ix < g.nx; ++ix)
        for (unsigned ixi = 0; ixi < g.nxi(); ++ixi) {
            cplx r = g.at(ix, ixi);
            double cap = 2.0 * delta * std::min(1.0, std::pow(std::abs(r), 3.0));
            for (unsigned s = 1; s <= x1_samples; ++s) {
                double x1 = cap * (double)s / (double)x1_samples;
                cplx phase(0.0, 0.0);
                double xk = 1.0;
                for (unsigned k = 1; k <= ph.order; ++k) {
                    xk *= x1;
                    phase += xk * ph.phi[k - 1].at(ix, ixi);
                }
                if (phase.imag() < 0.5 * x1 * r.imag() - 1e-14 * (1.0 + std::fabs(phase.imag())))
                    return false;
            }
        }
    return true;
}

// Largest delta (resolution 1e-3) for which the bound holds.
inline double phase_bound_delta_star(const phase_jet& ph, double delta_max = 1.0) {
    if (!phase_bound_holds(ph, 1e-3)) return 0.0;
    double lo = 1e-3, hi = delta_max;
    if (phase_bound_holds(ph, hi)) return hi;
    while (hi - lo > 1e-3) {
        double mid = 0.5 * (lo + hi);
        (phase_bound_holds(ph, mid) ? lo : hi) = mid;
    }
    return lo;
}

} // namespace tevr
