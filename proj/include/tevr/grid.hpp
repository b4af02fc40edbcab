#pragma once

// Symbol grids on T*Gamma for the circle: periodic uniform x'-grid (power of
// two, for the spectral derivative) times a uniform xi'-grid. Differentiation
// is spectral in x' and 4th-order central in xi'.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "tevr/errors.hpp"
#include "tevr/scaled.hpp"

namespace tevr {

namespace fft_detail {

// In-place iterative radix-2 FFT; sign = -1 forward, +1 inverse (unscaled).
inline void fft(std::vector<cplx>& a, int sign) {
    const size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) fail(errc::invalid_argument, "fft size must be a power of two");
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        double ang = sign * 2.0 * M_PI / (double)len;
        cplx wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (size_t j = 0; j < len / 2; ++j) {
                cplx u = a[i + j];
                cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

} // namespace fft_detail

struct symbol_grid {
    double circumference = 2.0 * M_PI;
    unsigned nx = 0;
    std::vector<double> xi_nodes;
    std::vector<cplx> values; // row-major: values[ix * nxi() + ixi]

    unsigned nxi() const { return (unsigned)xi_nodes.size(); }
    double x_node(unsigned ix) const { return circumference * (double)ix / (double)nx; }
    cplx& at(unsigned ix, unsigned ixi) { return values[(size_t)ix * nxi() + ixi]; }
    cplx at(unsigned ix, unsigned ixi) const { return values[(size_t)ix * nxi() + ixi]; }
    double dxi() const { return xi_nodes.size() > 1 ? xi_nodes[1] - xi_nodes[0] : 0.0; }
};

inline std::vector<double> uniform_xi_nodes(double xi_max, unsigned nxi) {
    if (nxi < 16 || nxi % 2 == 0) fail(errc::invalid_argument, "xi grid needs an odd size >= 16");
    std::vector<double> xs(nxi);
    for (unsigned i = 0; i < nxi; ++i) xs[i] = -xi_max + 2.0 * xi_max * (double)i / (double)(nxi - 1);
    xs[(nxi - 1) / 2] = 0.0;
    return xs;
}

template <class F>
symbol_grid make_symbol_grid(double circumference, unsigned nx, std::vector<double> xi_nodes, F&& f) {
    if (nx < 16 || (nx & (nx - 1)) != 0) fail(errc::invalid_argument, "x grid needs a power-of-two size >= 16");
    symbol_grid g;
    g.circumference = circumference;
    g.nx = nx;
    g.xi_nodes = std::move(xi_nodes);
    g.values.resize((size_t)nx * g.nxi());
    for (unsigned ix = 0; ix < nx; ++ix) {
        double x = g.x_node(ix);
        for (unsigned ixi = 0; ixi < g.nxi(); ++ixi) g.at(ix, ixi) = f(x, g.xi_nodes[ixi]);
    }
    return g;
}

template <class F>
symbol_grid make_symbol_grid(double circumference, unsigned nx, double xi_max, unsigned nxi, F&& f) {
    return make_symbol_grid(circumference, nx, uniform_xi_nodes(xi_max, nxi), std::forward<F>(f));
}

// Spectral d/dx' along the periodic direction.
inline symbol_grid deriv_x(const symbol_grid& g) {
    symbol_grid out = g;
    const unsigned n = g.nx, m = g.nxi();
    std::vector<cplx> col(n);
    for (unsigned ixi = 0; ixi < m; ++ixi) {
        for (unsigned ix = 0; ix < n; ++ix) col[ix] = g.at(ix, ixi);
        fft_detail::fft(col, -1);
        for (unsigned k = 0; k < n; ++k) {
            long kk = (k <= n / 2) ? (long)k : (long)k - (long)n;
            if (k == n / 2) kk = 0; // drop the unmatched Nyquist mode
            col[k] *= cplx(0.0, 2.0 * M_PI * (double)kk / g.circumference);
        }
        fft_detail::fft(col, +1);
        for (unsigned ix = 0; ix < n; ++ix) out.at(ix, ixi) = col[ix] / (double)n;
    }
    return out;
}

// 4th-order central d/dxi'. Two nodes at each xi-edge become invalid per
// application; callers track the accumulated margin.
inline symbol_grid deriv_xi(const symbol_grid& g) {
    symbol_grid out = g;
    const unsigned n = g.nx, m = g.nxi();
    const double h = g.dxi();
    for (unsigned ix = 0; ix < n; ++ix) {
        for (unsigned i = 0; i < m; ++i) {
            if (i < 2 || i + 2 >= m) {
                out.at(ix, i) = cplx(0.0, 0.0);
                continue;
            }
            out.at(ix, i) =
                (-g.at(ix, i + 2) + 8.0 * g.at(ix, i + 1) - 8.0 * g.at(ix, i - 1) + g.at(ix, i - 2)) / (12.0 * h);
        }
    }
    return out;
}

// x'-Fourier coefficients of one xi-column: c[k] with f(x) = sum c_k e^{2pi i k x / L},
// k stored in FFT order (0..n-1, negative frequencies in the upper half).
inline std::vector<cplx> x_fourier_coeffs(const symbol_grid& g, unsigned ixi) {
    std::vector<cplx> col(g.nx);
    for (unsigned ix = 0; ix < g.nx; ++ix) col[ix] = g.at(ix, ixi);
    fft_detail::fft(col, -1);
    for (auto& c : col) c /= (double)g.nx;
    return col;
}

// Cubic (4-point Lagrange) interpolation in xi at fixed x-node; exact at nodes.
inline cplx interp_xi(const symbol_grid& g, unsigned ix, double xi) {
    const auto& xs = g.xi_nodes;
    const unsigned m = g.nxi();
    if (xi < xs.front() - 1e-12 || xi > xs.back() + 1e-12)
        fail(errc::frequency_out_of_range, "xi outside the symbol grid range");
    double t = (xi - xs.front()) / g.dxi();
    long i1 = (long)std::floor(t);
    if ((double)i1 == t && i1 >= 0 && i1 < (long)m) return g.at(ix, (unsigned)i1);
    long i0 = i1 - 1;
    if (i0 < 0) i0 = 0;
    if (i0 + 3 >= (long)m) i0 = (long)m - 4;
    cplx acc(0.0, 0.0);
    for (long j = i0; j < i0 + 4; ++j) {
        double lj = 1.0;
        for (long l = i0; l < i0 + 4; ++l)
            if (l != j) lj *= (xi - xs[(size_t)l]) / (xs[(size_t)j] - xs[(size_t)l]);
        acc += lj * g.at(ix, (unsigned)j);
    }
    return acc;
}

} // namespace tevr
