#include "grid.hpp"

#include <cmath>

namespace fivol {

size_t GridFunction::index(const std::vector<int>& idx) const {
    size_t s = 0;
    for (int a = 0; a < n; ++a) s = s * res[a] + idx[a];
    return s;
}

GridFunction sample_grid(const SpecPtr& f, const Vec& lo, const Vec& hi,
                         const std::vector<int>& res) {
    GridFunction g;
    g.n = f->n;
    g.lo = lo;
    g.hi = hi;
    g.res = res;
    size_t total = 1;
    for (int a = 0; a < g.n; ++a) total *= res[a];
    g.values.resize(total);
    std::vector<int> idx(g.n, 0);
    for (size_t s = 0; s < total; ++s) {
        Vec x(g.n);
        for (int a = 0; a < g.n; ++a) x[a] = g.coord(a, idx[a]);
        ExtReal v = evaluate(f, x);
        g.values[s] = v.finite ? v.v : kInf;
        for (int a = g.n - 1; a >= 0; --a) {
            if (++idx[a] < res[a]) break;
            idx[a] = 0;
        }
    }
    return g;
}

namespace {

// one-dimensional discrete Legendre step:
// out[k] = max_j (x_j * y_k + sign * f[j*stride]); sentinel entries are skipped
void llt_axis(const std::vector<double>& xs, const double* f, size_t stride, int N,
              const std::vector<double>& ys, double* out, size_t stride_out, double sign) {
    for (size_t k = 0; k < ys.size(); ++k) {
        double best = -kInf;
        for (int j = 0; j < N; ++j) {
            double fj = f[j * stride];
            if (fj == kInf) continue;
            double v = xs[j] * ys[k] + sign * fj;
            if (v > best) best = v;
        }
        out[k * stride_out] = (best == -kInf) ? kInf : best;
    }
}

}  // namespace

GridFunction grid_conjugate(const GridFunction& g, const Vec& dual_lo, const Vec& dual_hi,
                            const std::vector<int>& dual_res) {
    // Transform axis by axis:
    //   u*(y) = max_{x_1} [ y_1 x_1 + ( max_{x_2..} ... - u(x) ) ]
    // Each pass replaces one primal axis by a dual axis.
    GridFunction cur = g;
    for (int axis = 0; axis < g.n; ++axis) {
        GridFunction next;
        next.n = g.n;
        next.lo = cur.lo;
        next.hi = cur.hi;
        next.lo[axis] = dual_lo[axis];
        next.hi[axis] = dual_hi[axis];
        next.res = cur.res;
        next.res[axis] = dual_res[axis];
        size_t total = 1;
        for (int a = 0; a < g.n; ++a) total *= next.res[a];
        next.values.assign(total, 0.0);

        int N = cur.res[axis];
        int M = dual_res[axis];
        std::vector<double> xs(N), ys(M);
        for (int j = 0; j < N; ++j) xs[j] = cur.coord(axis, j);
        for (int k = 0; k < M; ++k) ys[k] = next.coord(axis, k);

        // stride of the axis within each layout
        size_t stride_in = 1, stride_out = 1;
        for (int a = axis + 1; a < g.n; ++a) {
            stride_in *= cur.res[a];
            stride_out *= next.res[a];
        }
        size_t outer = 1, inner = stride_in;
        for (int a = 0; a < axis; ++a) outer *= cur.res[a];

        for (size_t o = 0; o < outer; ++o)
            for (size_t i = 0; i < inner; ++i) {
                const double* fin = cur.values.data() + o * (N * stride_in) + i;
                double* fout = next.values.data() + o * (M * stride_out) + i;
                // first pass maximizes x y - u; later passes fold in the
                // already-maximized partial result with a plus sign
                llt_axis(xs, fin, stride_in, N, ys, fout, stride_out,
                         axis == 0 ? -1.0 : 1.0);
            }
        cur = std::move(next);
    }
    return cur;
}

double grid_ma_integral(const GridFunction& g, const Density& beta) {
    const int n = g.n;
    std::vector<double> h(n);
    for (int a = 0; a < n; ++a) h[a] = (g.hi[a] - g.lo[a]) / (g.res[a] - 1);
    double cell = 1.0;
    for (int a = 0; a < n; ++a) cell *= h[a];

    std::vector<int> idx(n, 1);
    double acc = 0.0;
    bool done = false;
    while (!done) {
        // central-difference Hessian at an interior node
        bool ok = true;
        std::vector<int> jdx = idx;
        auto val = [&](const std::vector<int>& v) { return g.values[g.index(v)]; };
        SymMat H(n);
        double f0 = val(idx);
        if (f0 == kInf) ok = false;
        if (ok) {
            for (int a = 0; a < n && ok; ++a) {
                jdx = idx;
                jdx[a] += 1;
                double fp = val(jdx);
                jdx[a] -= 2;
                double fm = val(jdx);
                if (fp == kInf || fm == kInf) { ok = false; break; }
                H.at(a, a) = (fp - 2.0 * f0 + fm) / (h[a] * h[a]);
            }
            for (int a = 0; a < n && ok; ++a)
                for (int b2 = a + 1; b2 < n && ok; ++b2) {
                    jdx = idx;
                    jdx[a] += 1; jdx[b2] += 1;
                    double fpp = val(jdx);
                    jdx[b2] -= 2;
                    double fpm = val(jdx);
                    jdx[a] -= 2;
                    double fmm = val(jdx);
                    jdx[b2] += 2;
                    double fmp = val(jdx);
                    if (fpp == kInf || fpm == kInf || fmm == kInf || fmp == kInf) {
                        ok = false;
                        break;
                    }
                    H.set(a, b2, (fpp - fpm - fmp + fmm) / (4.0 * h[a] * h[b2]));
                }
        }
        if (ok) {
            Vec x(n);
            for (int a = 0; a < n; ++a) x[a] = g.coord(a, idx[a]);
            double bv = beta.eval(x.norm());
            if (bv != 0.0) acc += bv * det(H) * cell;
        }
        for (int a = n - 1; a >= 0; --a) {
            if (++idx[a] < g.res[a] - 1) break;
            idx[a] = 1;
            if (a == 0) done = true;
        }
    }
    return acc;
}

}  // namespace fivol
