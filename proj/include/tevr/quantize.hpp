#pragma once

// h-pseudodifferential quantization on the circle. Left quantization acts on
// Fourier modes as f_m -> a(x, 2 pi h m / L) f_m e^{2 pi i m x / L}; the
// Fourier-basis matrix is A[j][m] = a^(j-m)(xi_m) with a^(p) the p-th
// x'-Fourier coefficient, so multipliers are exactly diagonal.

#include <cmath>
#include <complex>
#include <vector>

#include "tevr/errors.hpp"
#include "tevr/grid.hpp"
#include "tevr/threading.hpp"

namespace tevr {

struct periodic_function {
    double circumference = 2.0 * M_PI;
    int m_max = 0;
    std::vector<cplx> coeffs; // c[m + m_max], f(x) = sum c_m e^{2 pi i m x / L}

    cplx coeff(int m) const {
        if (std::abs(m) > m_max) return {0.0, 0.0};
        return coeffs[(size_t)(m + m_max)];
    }
    // ||f||^2_{L2} = L sum |c_m|^2
    double l2_norm_sq() const {
        double s = 0.0;
        for (auto c : coeffs) s += std::norm(c);
        return circumference * s;
    }
};

namespace quantize_detail {

inline double xi_of_mode(double h, int m, double L) { return 2.0 * M_PI * h * (double)m / L; }

// symbol value a(x_node ix, xi), cubic interpolation between xi nodes
inline cplx symbol_at(const symbol_grid& a, unsigned ix, double xi) { return interp_xi(a, ix, xi); }

} // namespace quantize_detail

inline periodic_function op_h_apply(const symbol_grid& a, const periodic_function& f, double h) {
    if (a.circumference != f.circumference)
        fail(errc::invalid_argument, "op_h_apply: circumference mismatch");
    double ximax = std::max(std::fabs(a.xi_nodes.front()), std::fabs(a.xi_nodes.back()));
    double xitop = quantize_detail::xi_of_mode(h, f.m_max, f.circumference);
    if (std::fabs(xitop) > ximax + 1e-12)
        fail(errc::frequency_out_of_range, "op_h_apply: 2 pi h M / L exceeds the symbol grid");

    // g's band extends by the symbol's x'-bandwidth
    int half = (int)a.nx / 2;
    periodic_function g;
    g.circumference = f.circumference;
    g.m_max = f.m_max + half;
    g.coeffs.assign(2 * (size_t)g.m_max + 1, {0.0, 0.0});

    for (int m = -f.m_max; m <= f.m_max; ++m) {
        cplx fm = f.coeff(m);
        if (fm == cplx(0.0, 0.0)) continue;
        double xi = quantize_detail::xi_of_mode(h, m, f.circumference);
        // column of symbol values, then x'-FFT
        std::vector<cplx> col(a.nx);
        for (unsigned ix = 0; ix < a.nx; ++ix) col[ix] = quantize_detail::symbol_at(a, ix, xi);
        fft_detail::fft(col, -1);
        for (unsigned p = 0; p < a.nx; ++p) {
            long pp = (p <= a.nx / 2) ? (long)p : (long)p - (long)a.nx;
            g.coeffs[(size_t)(m + pp + g.m_max)] += col[p] / (double)a.nx * fm;
        }
    }
    return g;
}

// Dense matrix of Op_h(a) on modes |m| <= M in the orthonormal exponential basis.
struct op_matrix {
    int M = 0;
    std::vector<cplx> a; // (2M+1) x (2M+1), row j, col m, index (j+M)*(2M+1)+(m+M)

    size_t dim() const { return 2 * (size_t)M + 1; }
    cplx& at(int j, int m) { return a[(size_t)(j + M) * dim() + (size_t)(m + M)]; }
    cplx at(int j, int m) const { return a[(size_t)(j + M) * dim() + (size_t)(m + M)]; }
};

inline op_matrix op_h_matrix(const symbol_grid& sym, double h, int M, unsigned threads = 0) {
    double ximax = std::max(std::fabs(sym.xi_nodes.front()), std::fabs(sym.xi_nodes.back()));
    if (2.0 * M_PI * h * (double)M / sym.circumference > ximax + 1e-12)
        fail(errc::frequency_out_of_range, "op_h_matrix: 2 pi h M / L exceeds the symbol grid");
    op_matrix A;
    A.M = M;
    A.a.assign(A.dim() * A.dim(), {0.0, 0.0});
    parallel_for((size_t)(2 * M + 1), [&](size_t b, size_t e) {
        std::vector<cplx> col(sym.nx);
        for (size_t cm = b; cm < e; ++cm) {
            int m = (int)cm - M;
            double xi = quantize_detail::xi_of_mode(h, m, sym.circumference);
            for (unsigned ix = 0; ix < sym.nx; ++ix) col[ix] = quantize_detail::symbol_at(sym, ix, xi);
            fft_detail::fft(col, -1);
            for (unsigned p = 0; p < sym.nx; ++p) {
                long pp = (p <= sym.nx / 2) ? (long)p : (long)p - (long)sym.nx;
                long j = (long)m + pp;
                if (j < -M || j > M) continue;
                A.at((int)j, m) += col[p] / (double)sym.nx;
            }
        }
    }, threads);
    return A;
}

inline void matvec(const op_matrix& A, const std::vector<cplx>& x, std::vector<cplx>& y,
                   bool adjoint, unsigned threads = 0) {
    const size_t n = A.dim();
    y.assign(n, {0.0, 0.0});
    parallel_for(n, [&](size_t b, size_t e) {
        for (size_t r = b; r < e; ++r) {
            cplx acc(0.0, 0.0);
            if (!adjoint) {
                const cplx* row = &A.a[r * n];
                for (size_t c = 0; c < n; ++c) acc += row[c] * x[c];
            } else {
                for (size_t c = 0; c < n; ++c) acc += std::conj(A.a[c * n + r]) * x[c];
            }
            y[r] = acc;
        }
    }, threads);
}

// Operator norm by power iteration on A*A, deterministic all-ones start.
inline double op_norm(const op_matrix& A, double tol = 1e-8, int max_iter = 10000,
                      unsigned threads = 0) {
    const size_t n = A.dim();
    std::vector<cplx> v(n, cplx(1.0, 0.0)), w, u;
    double nv = std::sqrt((double)n);
    for (auto& c : v) c /= nv;
    double sigma = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        matvec(A, v, w, false, threads);
        double s = 0.0;
        for (auto c : w) s += std::norm(c);
        s = std::sqrt(s);
        if (s == 0.0) return 0.0;
        matvec(A, w, u, true, threads);
        double nu = 0.0;
        for (auto c : u) nu += std::norm(c);
        nu = std::sqrt(nu);
        if (nu == 0.0) return s;
        for (size_t i = 0; i < n; ++i) v[i] = u[i] / nu;
        if (it > 0 && std::fabs(s - sigma) <= tol * std::max(s, 1e-300)) return s;
        sigma = s;
    }
    fail(errc::no_convergence, "op_norm: power iteration did not converge");
}

inline op_matrix multiply(const op_matrix& A, const op_matrix& B, unsigned threads = 0) {
    if (A.M != B.M) fail(errc::invalid_argument, "matrix dimension mismatch");
    const size_t n = A.dim();
    op_matrix C;
    C.M = A.M;
    C.a.assign(n * n, {0.0, 0.0});
    parallel_for(n, [&](size_t b, size_t e) {
        for (size_t i = b; i < e; ++i) {
            const cplx* arow = &A.a[i * n];
            cplx* crow = &C.a[i * n];
            for (size_t k = 0; k < n; ++k) {
                cplx aik = arow[k];
                if (aik == cplx(0.0, 0.0)) continue;
                const cplx* brow = &B.a[k * n];
                for (size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
            }
        }
    }, threads);
    return C;
}

inline op_matrix subtract(const op_matrix& A, const op_matrix& B) {
    if (A.M != B.M) fail(errc::invalid_argument, "matrix dimension mismatch");
    op_matrix C = A;
    for (size_t i = 0; i < C.a.size(); ++i) C.a[i] -= B.a[i];
    return C;
}

inline op_matrix central_block(const op_matrix& A, int M) {
    if (M > A.M) fail(errc::invalid_argument, "central_block: M exceeds matrix range");
    op_matrix B;
    B.M = M;
    B.a.assign(B.dim() * B.dim(), {0.0, 0.0});
    for (int j = -M; j <= M; ++j)
        for (int m = -M; m <= M; ++m) B.at(j, m) = A.at(j, m);
    return B;
}

// || Op(a+) Op(a-) - Op(a+ a-) ||_{L2 -> L2} measured on modes |m| <= M.
// The product is formed on a padded range so the intermediate-frequency sums
// of the composition are complete on the measured block; without padding the
// hard truncation injects an O(1) edge artifact that does not decay in h.
inline double composition_defect(const symbol_grid& a_plus, const symbol_grid& a_minus, double h,
                                 int M, unsigned threads = 0, double tol = 1e-8, int pad = -1) {
    if (a_plus.nx != a_minus.nx || a_plus.xi_nodes != a_minus.xi_nodes)
        fail(errc::invalid_argument, "composition_defect: incompatible symbol grids");
    if (pad < 0) pad = (int)a_plus.nx / 2;
    symbol_grid prod = a_plus;
    for (size_t i = 0; i < prod.values.size(); ++i) prod.values[i] *= a_minus.values[i];
    op_matrix Ap = op_h_matrix(a_plus, h, M + pad, threads);
    op_matrix Am = op_h_matrix(a_minus, h, M + pad, threads);
    op_matrix AP = op_h_matrix(prod, h, M + pad, threads);
    op_matrix D = central_block(subtract(multiply(Ap, Am, threads), AP), M);
    return op_norm(D, tol, 10000, threads);
}

} // namespace tevr
