#pragma once

// Zero localization for analytic functions on axis-aligned rectangles by the
// argument principle: adaptive contour sampling for exact winding numbers,
// quadrisection until cells hold at most one zero, Newton polish, and the
// per-angular-mode aggregation for the disk transmission determinant.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include "tevr/diskmodel.hpp"
#include "tevr/errors.hpp"
#include "tevr/scaled.hpp"
#include "tevr/threading.hpp"

namespace tevr {

using scaled_fn = std::function<scaled_cplx(cplx)>;

struct scan_rect {
    double re_min = 0, re_max = 1, im_min = -1, im_max = 1;

    double width() const { return re_max - re_min; }
    double height() const { return im_max - im_min; }
    double diam() const { return std::hypot(width(), height()); }
    cplx center() const { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }
    bool contains(cplx z, double margin = 0.0) const {
        return z.real() >= re_min - margin && z.real() <= re_max + margin &&
               z.imag() >= im_min - margin && z.imag() <= im_max + margin;
    }
    double scale() const {
        return std::max({std::fabs(re_min), std::fabs(re_max), std::fabs(im_min), std::fabs(im_max), 1.0});
    }
};

struct eig_record {
    cplx lambda{0.0, 0.0};
    int mode = 0;
    int multiplicity = 1;
    double residual_log10 = 0.0;  // log10 |f| at the root (log-scale included)
    double rel_residual = 0.0;    // final Newton step relative to 1 + |lambda|
    int newton_iters = 0;
    bool certified_real = false;
};

namespace rootscan_detail {

struct contour_sample {
    double phase;
    double log_abs;
};

// Winding of f along the rectangle boundary using n samples per side.
// Returns false through `ok` when a phase jump exceeds pi/2 (caller doubles
// the sampling); throws contour_through_zero when a sample sits on a zero
// relative to the contour's magnitude range.
inline bool try_winding(const scaled_fn& f, const scan_rect& r, int per_side, long& result) {
    const int total = 4 * per_side;
    std::vector<contour_sample> s((size_t)total);
    auto point = [&](int i) -> cplx {
        int side = i / per_side;
        double t = (double)(i % per_side) / (double)per_side;
        switch (side) {
            case 0: return {r.re_min + t * r.width(), r.im_min};
            case 1: return {r.re_max, r.im_min + t * r.height()};
            case 2: return {r.re_max - t * r.width(), r.im_max};
            default: return {r.re_min, r.im_max - t * r.height()};
        }
    };
    for (int i = 0; i < total; ++i) {
        scaled_cplx v = f(point(i));
        if (v.is_zero()) fail(errc::contour_through_zero, "winding: exact zero on the contour");
        s[(size_t)i] = {std::arg(v.value), v.log_abs()};
    }
    // a zero essentially on the contour shows as a deep local dip; the global
    // modulus can legitimately vary by hundreds of orders along the contour
    for (int i = 0; i < total; ++i) {
        double prev = s[(size_t)((i + total - 1) % total)].log_abs;
        double next = s[(size_t)((i + 1) % total)].log_abs;
        if (s[(size_t)i].log_abs < std::min(prev, next) - 34.5) // 1e-15 relative to neighbors
            fail(errc::contour_through_zero, "winding: zero within resolution of the contour");
    }
    double acc = 0.0;
    for (int i = 0; i < total; ++i) {
        double d = s[(size_t)((i + 1) % total)].phase - s[(size_t)i].phase;
        while (d > M_PI) d -= 2.0 * M_PI;
        while (d < -M_PI) d += 2.0 * M_PI;
        if (std::fabs(d) > 0.5 * M_PI) return false;
        acc += d;
    }
    result = std::lround(acc / (2.0 * M_PI));
    return true;
}

} // namespace rootscan_detail

// Exact winding number of f around the rectangle. Sampling starts at
// `per_side` and doubles on unresolved phase jumps up to 2^14 per side; a
// detected zero on the contour dilates the rectangle by 1e-6 and retries up
// to 5 times.
// Winding number with sampling that doubles until every inter-sample phase
// jump is below pi/2. Without dilation a zero too close to the contour is a
// hard error; with dilation the rectangle grows by an escalating margin and
// retries (used at top level only, where the region is ours to perturb --
// dilating inside a subdivision would break the exact tiling of the parent).
inline long winding_count(const scaled_fn& f, scan_rect r, int per_side = 64,
                          bool allow_dilation = true) {
    double grow = 1e-6;
    errc last = errc::phase_jump_unresolved;
    for (int dilate = 0; dilate <= 5; ++dilate) {
        bool hit_zero = false;
        for (int n = per_side; n <= (1 << 14); n *= 2) {
            long w = 0;
            bool ok = false;
            try {
                ok = rootscan_detail::try_winding(f, r, n, w);
            } catch (const error& e) {
                if (e.code() != errc::contour_through_zero) throw;
                hit_zero = true;
                break;
            }
            if (ok) return w;
        }
        last = hit_zero ? errc::contour_through_zero : errc::phase_jump_unresolved;
        if (!allow_dilation)
            fail(last, "winding: zero at the contour within sampling resolution");
        double fx = grow * std::max(r.width(), r.height());
        grow *= 4.0;
        r = {r.re_min - fx, r.re_max + fx, r.im_min - fx, r.im_max + fx};
    }
    fail(last, last == errc::contour_through_zero
                   ? "winding: contour keeps hitting zeros after dilation"
                   : "winding: phase jumps unresolved at max sampling after dilation");
}

namespace rootscan_detail {

inline scaled_cplx derivative(const scaled_fn& f, cplx z, double scale) {
    double step = 1e-7 * scale;
    scaled_cplx fp = f(z + cplx(step, 0.0));
    scaled_cplx fm = f(z - cplx(step, 0.0));
    double ls = std::max(fp.log_scale, fm.log_scale);
    cplx num = fp.value * std::exp(fp.log_scale - ls) - fm.value * std::exp(fm.log_scale - ls);
    scaled_cplx d{num / (2.0 * step), ls};
    d.normalize();
    return d;
}

struct newton_result {
    cplx z;
    int iters = 0;
    bool converged = false;
    double rel_step = 1e300;
    double f_log10 = 0.0;
};

inline newton_result newton_polish(const scaled_fn& f, cplx z0, double tol, int max_iter = 60) {
    newton_result res;
    res.z = z0;
    for (int it = 0; it < max_iter; ++it) {
        double scale = 1.0 + std::abs(res.z);
        scaled_cplx fv = f(res.z);
        if (fv.is_zero()) {
            res.converged = true;
            res.iters = it;
            res.rel_step = 0.0;
            res.f_log10 = -400.0;
            return res;
        }
        scaled_cplx dv = derivative(f, res.z, scale);
        if (dv.is_zero()) break;
        scaled_cplx q = fv / dv;
        double qlog = q.log_abs();
        if (qlog > std::log(scale)) break; // step larger than the scale: diverging
        cplx step = q.unscaled();
        res.z -= step;
        res.iters = it + 1;
        res.rel_step = std::abs(step) / scale;
        if (res.rel_step <= tol) {
            res.converged = true;
            res.f_log10 = f(res.z).log_abs() / M_LN10;
            return res;
        }
    }
    res.f_log10 = f(res.z).log_abs() / M_LN10;
    return res;
}

// min-|f| grid search inside a cell, fallback when Newton diverges
inline cplx min_abs_scan(const scaled_fn& f, const scan_rect& r, int n = 16) {
    double best = std::numeric_limits<double>::infinity();
    cplx arg = r.center();
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            cplx z{r.re_min + r.width() * (double)i / n, r.im_min + r.height() * (double)j / n};
            double la = f(z).log_abs();
            if (la < best) {
                best = la;
                arg = z;
            }
        }
    return arg;
}

struct scan_state {
    const scaled_fn* f;
    double tol;
    std::vector<eig_record> found;
};

inline void scan_cell(scan_state& st, const scan_rect& r, long w, int depth) {
    if (w == 0) return;
    const double min_diam = 1e3 * st.tol * r.scale();
    const bool at_floor = r.diam() < min_diam || depth > 60;
    if (w == 1 || at_floor) {
        // polish from the center; accept only roots that stay inside this
        // cell, otherwise a zero near a shared edge could be reported twice
        const double edge_tol = 1e-12 * r.scale();
        newton_result nr = newton_polish(*st.f, r.center(), st.tol);
        bool inside = nr.converged && r.contains(nr.z, edge_tol);
        if (!inside && at_floor) {
            cplx seed = min_abs_scan(*st.f, r);
            newton_result nr2 = newton_polish(*st.f, seed, st.tol);
            if (nr2.converged && r.contains(nr2.z, edge_tol)) {
                nr = nr2;
                inside = true;
            } else {
                // cell is at resolution: report the best in-cell point
                nr.z = seed;
                nr.rel_step = r.diam() / (1.0 + std::abs(seed));
                nr.f_log10 = (*st.f)(seed).log_abs() / M_LN10;
                inside = true;
            }
        }
        if (inside) {
            eig_record rec;
            rec.lambda = nr.z;
            rec.multiplicity = (int)w;
            rec.residual_log10 = nr.f_log10;
            rec.rel_residual = nr.rel_step;
            rec.newton_iters = nr.iters;
            st.found.push_back(rec);
            return;
        }
        // converged outside or not at all: subdivide further
    }
    // quadrisection, with the split lines nudged when a child contour hits a
    // zero or the child windings fail to add up (strict partition: children
    // never dilate, so conservation is exact whenever all four resolve)
    const double fractions[] = {0.5, 0.53, 0.47, 0.515, 0.485, 0.56, 0.44, 0.509, 0.491, 0.4775};
    for (double fr : fractions) {
        double xm = r.re_min + fr * r.width();
        double ym = r.im_min + fr * r.height();
        scan_rect quads[4] = {{r.re_min, xm, r.im_min, ym},
                              {xm, r.re_max, r.im_min, ym},
                              {r.re_min, xm, ym, r.im_max},
                              {xm, r.re_max, ym, r.im_max}};
        long ws[4];
        bool ok = true;
        try {
            for (int q = 0; q < 4; ++q) ws[q] = winding_count(*st.f, quads[q], 32, false);
        } catch (const error& e) {
            if (e.code() != errc::contour_through_zero && e.code() != errc::phase_jump_unresolved)
                throw;
            ok = false;
        }
        if (!ok) continue;
        if (ws[0] + ws[1] + ws[2] + ws[3] != w) continue;
        for (int q = 0; q < 4; ++q) scan_cell(st, quads[q], ws[q], depth + 1);
        return;
    }
    // every split line kept landing on a zero: treat the cell as an
    // unresolvable cluster so the total multiplicity stays exact
    newton_result nr = newton_polish(*st.f, r.center(), st.tol);
    if (!(nr.converged && r.contains(nr.z, 1e-12 * r.scale()))) {
        cplx seed = min_abs_scan(*st.f, r);
        newton_result nr2 = newton_polish(*st.f, seed, st.tol);
        if (nr2.converged && r.contains(nr2.z, 1e-12 * r.scale())) {
            nr = nr2;
        } else {
            nr.z = seed;
            nr.rel_step = r.diam() / (1.0 + std::abs(seed));
            nr.f_log10 = (*st.f)(seed).log_abs() / M_LN10;
        }
    }
    eig_record rec;
    rec.lambda = nr.z;
    rec.multiplicity = (int)w;
    rec.residual_log10 = nr.f_log10;
    rec.rel_residual = nr.rel_step;
    rec.newton_iters = nr.iters;
    st.found.push_back(rec);
}

} // namespace rootscan_detail

// All zeros of f in the rectangle with multiplicities from winding numbers.
// The sum of multiplicities equals the rectangle's winding (asserted). If a
// zero sits on the given boundary the rectangle is perturbed outward first,
// so the whole subdivision below works on one fixed, clean region.
inline std::vector<eig_record> find_roots(const scaled_fn& f, const scan_rect& rect, double tol = 1e-10) {
    scan_rect work = rect;
    long w = 0;
    double grow = 1e-6;
    for (int attempt = 0;; ++attempt) {
        try {
            w = winding_count(f, work, 64, false);
            break;
        } catch (const error& e) {
            if (e.code() != errc::contour_through_zero && e.code() != errc::phase_jump_unresolved)
                throw;
            if (attempt >= 5) throw;
        }
        double fx = grow * std::max(work.width(), work.height());
        grow *= 4.0;
        work = {work.re_min - fx, work.re_max + fx, work.im_min - fx, work.im_max + fx};
    }
    rootscan_detail::scan_state st{&f, tol, {}};
    rootscan_detail::scan_cell(st, work, w, 0);
    long total = 0;
    for (const auto& r : st.found) total += r.multiplicity;
    if (total != w) fail(errc::contour_through_zero, "root multiplicities do not add up to the winding");
    return st.found;
}

// --- disk transmission spectrum ---------------------------------------------------

inline scaled_fn det_fn(const disk_config& cfg, unsigned k) {
    return [cfg, k](cplx lambda) { return transmission_det(k, lambda, cfg); };
}

struct spectrum_options {
    double tol = 1e-10;
    int k_max = -1;             // -1: automatic cutoff
    unsigned threads = 0;
    double exclusion_radius = -1.0; // -1: 1e-6 * rect scale
};

namespace rootscan_detail {

// Split a rectangle so that the closed square [-a,a]^2 around lambda = 0 is
// removed. Returns up to 4 rectangles tiling rect minus the square.
inline std::vector<scan_rect> exclude_origin(const scan_rect& r, double a) {
    if (r.re_min >= a || r.re_max <= -a || r.im_min >= a || r.im_max <= -a) return {r};
    std::vector<scan_rect> parts;
    if (r.re_min < -a) parts.push_back({r.re_min, -a, r.im_min, r.im_max});
    if (r.re_max > a) parts.push_back({a, r.re_max, r.im_min, r.im_max});
    double xl = std::max(r.re_min, -a), xr = std::min(r.re_max, a);
    if (r.im_min < -a) parts.push_back({xl, xr, r.im_min, -a});
    if (r.im_max > a) parts.push_back({xl, xr, a, r.im_max});
    return parts;
}

// Removing a tiny square from a huge rectangle directly would leave contour
// sides passing the excluded zero at a distance far below any resolvable
// fraction of their length. Nested square shells keep every part's standoff
// within a factor ~128 of its size, which contour sampling resolves easily.
inline std::vector<scan_rect> exclude_origin_shells(const scan_rect& r, double a) {
    if (r.re_min >= a || r.re_max <= -a || r.im_min >= a || r.im_max <= -a) return {r};
    double extent = std::max({std::fabs(r.re_min), std::fabs(r.re_max), std::fabs(r.im_min),
                              std::fabs(r.im_max)});
    std::vector<scan_rect> parts;
    double inner = a;
    while (inner < extent) {
        double outer = std::min(inner * 128.0, extent);
        scan_rect clipped{std::max(r.re_min, -outer), std::min(r.re_max, outer),
                          std::max(r.im_min, -outer), std::min(r.im_max, outer)};
        if (clipped.re_min < clipped.re_max && clipped.im_min < clipped.im_max) {
            auto shell = exclude_origin(clipped, inner);
            parts.insert(parts.end(), shell.begin(), shell.end());
        }
        inner = outer;
    }
    // the outermost square contains all of r, so the shells tile r minus the
    // exclusion square completely
    return parts;
}

// Exactly-real roots of the real-on-axis determinant are certified by a sign
// change and snapped to the axis; measurement noise in Im would otherwise
// masquerade as a complex part.
inline void certify_real_roots(const scaled_fn& f, std::vector<eig_record>& roots, double tol) {
    for (auto& r : roots) {
        double scale = 1.0 + std::abs(r.lambda);
        if (std::fabs(r.lambda.imag()) > 1e4 * tol * scale) continue;
        double x = r.lambda.real();
        double step0 = std::max(1e3 * tol * scale, 10.0 * std::fabs(r.lambda.imag()));
        // close to the root the difference structure of f cancels and inflates
        // the relative imaginary noise; widen the bracket if that happens
        for (double mult : {1.0, 1e2, 1e4}) {
            double step = step0 * mult;
            scaled_cplx fl = f({x - step, 0.0});
            scaled_cplx fr = f({x + step, 0.0});
            if (std::fabs(fl.value.imag()) > 1e-3 * std::abs(fl.value)) continue;
            if (std::fabs(fr.value.imag()) > 1e-3 * std::abs(fr.value)) continue;
            if ((fl.value.real() <= 0.0) != (fr.value.real() <= 0.0)) {
                r.lambda = {x, 0.0};
                r.certified_real = true;
            }
            break;
        }
    }
}

} // namespace rootscan_detail

// Transmission eigenvalues of the disk in the rectangle, aggregated over
// angular modes k = 0..k_max; modes k > 0 carry multiplicity 2 (e^{+-ik t}).
inline std::vector<eig_record> spectrum(const disk_config& cfg, const scan_rect& rect,
                                        spectrum_options opt = {}) {
    validate(cfg);
    double lam_max = 0.0;
    for (double re : {rect.re_min, rect.re_max})
        for (double im : {rect.im_min, rect.im_max}) lam_max = std::max(lam_max, std::hypot(re, im));
    int k_max = opt.k_max;
    if (k_max < 0) {
        double omega_max = std::sqrt(lam_max) * std::max(std::sqrt(cfg.n1 / cfg.c1), std::sqrt(cfg.n2 / cfg.c2));
        k_max = (int)std::ceil(omega_max * cfg.radius) + 20;
    }
    double excl = opt.exclusion_radius >= 0.0 ? opt.exclusion_radius : 1e-6 * rect.scale();
    auto parts = rootscan_detail::exclude_origin_shells(rect, excl);

    // sentinel check: three modes past the cutoff must have no zeros
    for (int s = 1; s <= 3; ++s) {
        auto f = det_fn(cfg, (unsigned)(k_max + s));
        for (const auto& p : parts)
            if (winding_count(f, p) != 0)
                fail(errc::sentinel_nonzero_winding, "spectrum: k_max cutoff too small");
    }

    std::vector<std::vector<eig_record>> per_mode((size_t)k_max + 1);
    parallel_for((size_t)k_max + 1, [&](size_t b, size_t e) {
        for (size_t k = b; k < e; ++k) {
            auto f = det_fn(cfg, (unsigned)k);
            std::vector<eig_record> roots;
            for (const auto& p : parts) {
                auto r = find_roots(f, p, opt.tol);
                roots.insert(roots.end(), r.begin(), r.end());
            }
            rootscan_detail::certify_real_roots(f, roots, opt.tol);
            for (auto& r : roots) {
                r.mode = (int)k;
                if (k > 0) r.multiplicity *= 2;
            }
            per_mode[k] = std::move(roots);
        }
    }, opt.threads);

    std::vector<eig_record> all;
    for (auto& v : per_mode) all.insert(all.end(), v.begin(), v.end());
    std::sort(all.begin(), all.end(), [](const eig_record& a, const eig_record& b) {
        if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
        if (a.lambda.imag() != b.lambda.imag()) return a.lambda.imag() < b.lambda.imag();
        return a.mode < b.mode;
    });
    return all;
}

} // namespace tevr
