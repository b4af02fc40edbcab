#pragma once

// Coefficient conditions (1.2)-(1.9), the eigenvalue-free region predicates,
// envelope-exponent fits (the falsifiable reading of "there exists C such
// that the region is eigenvalue-free"), and Weyl counting comparisons.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "tevr/diskmodel.hpp"
#include "tevr/errors.hpp"
#include "tevr/rootscan.hpp"
#include "tevr/spectral.hpp"

namespace tevr {

enum class region_kind { lambda_plus, lambda_minus, t12_front, t18_neg_axis, pv_strip };

struct region_spec {
    region_kind kind = region_kind::lambda_plus;
    double C = 1.0;       // C, C_eps or C_N depending on kind
    double epsilon = 0.0; // lambda_plus exponent margin
    double N = 1.0;       // t18_neg_axis decay order
    double C_tilde = 1.0; // lambda_minus left threshold
    double kappa = 1.0;   // pv_strip exponent parameter
};

inline bool in_region(cplx lambda, const region_spec& rs) {
    if (!(rs.C > 0.0)) fail(errc::invalid_argument, "region: constants must be positive");
    double re = lambda.real(), aim = std::fabs(lambda.imag());
    switch (rs.kind) {
        case region_kind::lambda_plus:
            if (!(rs.epsilon > 0.0 && rs.epsilon <= 0.25))
                fail(errc::invalid_argument, "region: epsilon outside (0, 0.25]");
            return re >= 0.0 && aim >= rs.C * std::pow(re + 1.0, 0.75 + rs.epsilon);
        case region_kind::lambda_minus:
            if (!(rs.C_tilde > 0.0)) fail(errc::invalid_argument, "region: C~ must be positive");
            return re <= -rs.C_tilde || (re <= 0.0 && aim >= rs.C);
        case region_kind::t12_front:
            return re >= 0.0 && aim >= rs.C * std::pow(re + 1.0, 0.8);
        case region_kind::t18_neg_axis:
            if (!(rs.N >= 1.0)) fail(errc::invalid_argument, "region: N must be >= 1");
            return re <= 0.0 && aim >= rs.C * std::pow(std::fabs(re) + 1.0, -rs.N);
        case region_kind::pv_strip:
            if (!(rs.kappa > 0.0 && rs.kappa <= 1.0))
                fail(errc::invalid_argument, "region: kappa outside (0, 1]");
            return aim >= rs.C * std::pow(std::fabs(re) + 1.0, 1.0 - 0.5 * rs.kappa);
    }
    return false;
}

// --- coefficient conditions -------------------------------------------------------

struct condition_flags {
    bool c1_2 = false; // c1 n1 != c2 n2
    bool c1_3 = false; // c1 = c2 (boundary values; the normal-derivative
                       // clause is vacuous for the constant media handled here)
    bool c1_4 = false; // c1 != c2
    bool c1_5 = false; // n1/c1 != n2/c2
    bool c1_6 = false; // n1/c1 = n2/c2
    bool c1_7 = false; // (c1-c2)(c1 n1 - c2 n2) > 0
    bool c1_8 = false; // (c1-c2)(c1 n1 - c2 n2) < 0
    bool c1_9 = false; // n1 = n2
};

inline condition_flags condition_flags_of(const medium_pair& mp, const boundary_geometry& geom,
                                          unsigned samples = 256) {
    constexpr double tol = 1e-12;
    condition_flags f;
    bool all_12 = true, all_13 = true, all_14 = true, all_15 = true, all_16 = true;
    bool all_17 = true, all_18 = true, all_19 = true;
    for (unsigned i = 0; i < samples; ++i) {
        double x = geom.circumference * (double)i / (double)samples;
        double c1 = mp.c1(x), n1 = mp.n1(x), c2 = mp.c2(x), n2 = mp.n2(x);
        if (!(c1 > 0 && n1 > 0 && c2 > 0 && n2 > 0))
            fail(errc::invalid_argument, "condition flags: coefficients must be positive");
        double cn1 = c1 * n1, cn2 = c2 * n2;
        auto eq = [&](double a, double b) { return std::fabs(a - b) <= tol * (std::fabs(a) + std::fabs(b)); };
        all_12 = all_12 && !eq(cn1, cn2);
        all_13 = all_13 && eq(c1, c2);
        all_14 = all_14 && !eq(c1, c2);
        all_15 = all_15 && !eq(n1 / c1, n2 / c2);
        all_16 = all_16 && eq(n1 / c1, n2 / c2);
        double prod = (c1 - c2) * (cn1 - cn2);
        all_17 = all_17 && prod > tol * (c1 + c2) * (cn1 + cn2);
        all_18 = all_18 && prod < -tol * (c1 + c2) * (cn1 + cn2);
        all_19 = all_19 && eq(n1, n2);
    }
    f.c1_2 = all_12;
    f.c1_3 = all_13;
    f.c1_4 = all_14;
    f.c1_5 = all_15;
    f.c1_6 = all_16;
    f.c1_7 = all_17;
    f.c1_8 = all_18;
    f.c1_9 = all_19;
    if (f.c1_8 && !f.c1_5)
        fail(errc::invalid_argument, "internal: (1.8) must imply (1.5)");
    if (f.c1_7 && f.c1_8) fail(errc::invalid_argument, "internal: (1.7) and (1.8) are exclusive");
    return f;
}

// --- envelope exponent fit --------------------------------------------------------

enum class branch_side { re_nonneg, re_nonpos };

struct exponent_fit_result {
    double beta = 0.0; // fitted envelope exponent
    double C = 0.0;    // fitted envelope constant (|Im| ~ C (|Re|+1)^beta)
    size_t branch_count = 0;
    size_t on_axis = 0;       // eigenvalues with Im = 0 (excluded from the fit)
    size_t decades_used = 0;
    bool below_floor = false; // every decade maximum is 0: envelope under any
                              // power law; beta reported as -infinity
};

inline exponent_fit_result exponent_fit(const std::vector<eig_record>& eigs, branch_side side) {
    exponent_fit_result out;
    std::vector<std::pair<double, double>> pts; // (|Re|+1, |Im|)
    for (const auto& r : eigs) {
        double re = r.lambda.real();
        if (side == branch_side::re_nonneg && re < 0.0) continue;
        if (side == branch_side::re_nonpos && re > 0.0) continue;
        ++out.branch_count;
        double t = std::fabs(re) + 1.0;
        double aim = std::fabs(r.lambda.imag());
        if (aim == 0.0) {
            ++out.on_axis;
            continue;
        }
        pts.emplace_back(t, aim);
    }
    if (out.branch_count < 10) fail(errc::insufficient_data, "exponent fit: fewer than 10 eigenvalues on the branch");

    // per-decade maxima of |Im| over decades of t, fit window t >= 10;
    // on-axis eigenvalues populate a decade without raising its maximum
    const int dmin = 1, dmax = 12;
    std::vector<double> best_t(dmax - dmin + 1, 0.0), best_im(dmax - dmin + 1, 0.0);
    std::vector<size_t> decade_count(dmax - dmin + 1, 0);
    for (const auto& r : eigs) {
        double re = r.lambda.real();
        if (side == branch_side::re_nonneg && re < 0.0) continue;
        if (side == branch_side::re_nonpos && re > 0.0) continue;
        double t = std::fabs(re) + 1.0;
        if (t < 10.0) continue;
        int d = (int)std::floor(std::log10(t));
        if (d >= dmin && d <= dmax) ++decade_count[(size_t)(d - dmin)];
    }
    for (auto& [t, aim] : pts) {
        if (t < 10.0) continue;
        int d = (int)std::floor(std::log10(t));
        if (d < dmin || d > dmax) continue;
        if (aim > best_im[(size_t)(d - dmin)]) {
            best_im[(size_t)(d - dmin)] = aim;
            best_t[(size_t)(d - dmin)] = t;
        }
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t n = 0;
    for (size_t i = 0; i < best_t.size(); ++i) {
        if (best_im[i] == 0.0) continue;
        double lx = std::log(best_t[i]), ly = std::log(best_im[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    out.decades_used = n;
    if (n == 0) {
        out.below_floor = true;
        out.beta = -std::numeric_limits<double>::infinity();
        out.C = 0.0;
        return out;
    }
    if (n == 1) {
        // a single decade cannot pin a slope. If higher decades are populated
        // purely by on-axis eigenvalues, the envelope has dropped below the
        // measurement floor there, which is stronger than any power law.
        size_t last_nonzero = 0;
        double level = 0.0;
        for (size_t i = 0; i < best_t.size(); ++i)
            if (best_im[i] > 0.0) {
                last_nonzero = i;
                level = best_im[i];
            }
        for (size_t i = last_nonzero + 1; i < decade_count.size(); ++i)
            if (decade_count[i] > 0) {
                out.below_floor = true;
                out.beta = -std::numeric_limits<double>::infinity();
                out.C = level;
                return out;
            }
        out.beta = 0.0;
        out.C = level;
        return out;
    }
    out.beta = (sxy - sx * sy / (double)n) / (sxx - sx * sx / (double)n);
    out.C = std::exp(sy / (double)n - out.beta * sx / (double)n);
    return out;
}

// --- Weyl comparisons -------------------------------------------------------------

struct weyl_row {
    double r = 0.0;
    bool total_valid = false;
    long counted = 0;
    double predicted = 0.0;
    double ratio = 0.0;
    bool neg_valid = false;
    long counted_neg = 0;
    double predicted_neg = 0.0; // 0 when (1.8) does not hold
    double ratio_neg = 0.0;
};

// tau_1 + tau_2 = (omega_2/(2 pi)^2) * (integral of m_1 + m_2 over the disk)
// = R^2 (m1 + m2)/4 for constant media on the disk of radius R.
inline double weyl_total_constant(const disk_config& cfg) {
    double m1 = cfg.n1 / cfg.c1, m2 = cfg.n2 / cfg.c2;
    return cfg.radius * cfg.radius * (m1 + m2) / 4.0;
}

// N^-(r) ~ (r/2pi) * omega_1 * |Gamma| * c^{-1/2}, c = |c1^2-c2^2|/|c1 n1 - c2 n2|.
inline double weyl_negative_constant(const disk_config& cfg) {
    double num = std::fabs(cfg.c1 * cfg.c1 - cfg.c2 * cfg.c2);
    double den = std::fabs(cfg.c1 * cfg.n1 - cfg.c2 * cfg.n2);
    double c = num / den;
    return (1.0 / M_PI) * 2.0 * M_PI * cfg.radius / std::sqrt(c); // (r/2pi)*2*|Gamma|*c^{-1/2} per unit r
}

// The two counting functions have different coverage needs: N(r) needs the
// scan to be complete over the whole disk |lambda| <= r^2, N^-(r) only over
// its Re < 0 part. A column is emitted only when its coverage flag holds;
// nothing established at all is the incomplete-spectrum error.
inline std::vector<weyl_row> weyl_compare(const std::vector<eig_record>& eigs, const disk_config& cfg,
                                          const std::vector<double>& r_values, bool complete_total,
                                          bool complete_negative) {
    if (!complete_total && !complete_negative)
        fail(errc::incomplete_spectrum, "weyl compare: spectrum completeness not established");
    auto flags = condition_flags_of(media_of(cfg), boundary_geometry::disk(cfg.radius));
    double tau_total = weyl_total_constant(cfg);
    double neg_slope = flags.c1_8 ? weyl_negative_constant(cfg) : 0.0;

    std::vector<weyl_row> table;
    for (double r : r_values) {
        weyl_row row;
        row.r = r;
        double r2 = r * r;
        for (const auto& e : eigs) {
            if (std::abs(e.lambda) > r2) continue;
            row.counted += e.multiplicity;
            if (e.lambda.real() < 0.0) row.counted_neg += e.multiplicity;
        }
        row.total_valid = complete_total;
        row.predicted = tau_total * r2;
        row.ratio = row.predicted > 0.0 ? (double)row.counted / row.predicted : 0.0;
        if (flags.c1_8) {
            row.neg_valid = complete_negative;
            row.predicted_neg = neg_slope * r;
            row.ratio_neg = row.predicted_neg > 0.0 ? (double)row.counted_neg / row.predicted_neg : 0.0;
        }
        table.push_back(row);
    }
    return table;
}

inline std::vector<weyl_row> weyl_compare(const std::vector<eig_record>& eigs, const disk_config& cfg,
                                          const std::vector<double>& r_values, bool spectrum_complete) {
    return weyl_compare(eigs, cfg, r_values, spectrum_complete, spectrum_complete);
}

} // namespace tevr
