#include "mat.hpp"

#include <numbers>

namespace fivol {

double det(const SymMat& m) {
    const int n = m.n;
    double lu[kMaxDim][kMaxDim];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) lu[i][j] = m.at(i, j);
    double d = 1.0;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(lu[i][k]) > std::fabs(lu[piv][k])) piv = i;
        if (lu[piv][k] == 0.0) return 0.0;
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(lu[piv][j], lu[k][j]);
            d = -d;
        }
        d *= lu[k][k];
        for (int i = k + 1; i < n; ++i) {
            double f = lu[i][k] / lu[k][k];
            for (int j = k; j < n; ++j) lu[i][j] -= f * lu[k][j];
        }
    }
    return d;
}

SymMat inverse(const SymMat& m) {
    const int n = m.n;
    double a[kMaxDim][2 * kMaxDim];
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[i][j] = m.at(i, j);
        for (int j = 0; j < n; ++j) a[i][n + j] = (i == j) ? 1.0 : 0.0;
    }
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(a[i][k]) > std::fabs(a[piv][k])) piv = i;
        if (a[piv][k] == 0.0) throw_numeric("singular matrix in inverse()");
        if (piv != k)
            for (int j = 0; j < 2 * n; ++j) std::swap(a[piv][j], a[k][j]);
        double f = a[k][k];
        for (int j = 0; j < 2 * n; ++j) a[k][j] /= f;
        for (int i = 0; i < n; ++i) {
            if (i == k) continue;
            double g = a[i][k];
            if (g == 0.0) continue;
            for (int j = 0; j < 2 * n; ++j) a[i][j] -= g * a[k][j];
        }
    }
    SymMat r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r.at(i, j) = a[i][n + j];
    // symmetrize against roundoff
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double v = 0.5 * (r.at(i, j) + r.at(j, i));
            r.set(i, j, v);
        }
    return r;
}

double mixed_discriminant(std::span<const SymMat> mats) {
    const int n = static_cast<int>(mats.size());
    if (n == 0 || n > kMaxDim) throw_parse("mixed_discriminant: needs 1..8 matrices");
    for (const auto& m : mats)
        if (m.n != n) throw_parse("mixed_discriminant: matrix dimension must equal argument count");
    // Polarization: det(A_1,...,A_n) = (1/n!) sum_{S != empty} (-1)^{n-|S|} det(sum_{i in S} A_i)
    double acc = 0.0;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        SymMat s(n);
        int card = 0;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) {
                s = s + mats[i];
                ++card;
            }
        double sign = ((n - card) % 2 == 0) ? 1.0 : -1.0;
        acc += sign * det(s);
    }
    double fact = 1.0;
    for (int i = 2; i <= n; ++i) fact *= i;
    return acc / fact;
}

double elem_sym(const SymMat& m, int j) {
    const int n = m.n;
    if (j < 0 || j > n) throw_parse("elem_sym: index out of range");
    if (j == 0) return 1.0;
    // Faddeev-LeVerrier: M_1 = A, a_1 = tr M_1; M_k = A (M_{k-1} - a_{k-1} I),
    // a_k = tr(M_k)/k. Then e_k = (-1)^{k-1} a_k.
    double A[kMaxDim][kMaxDim], M[kMaxDim][kMaxDim], T[kMaxDim][kMaxDim];
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            A[i][k] = m.at(i, k);
            M[i][k] = m.at(i, k);
        }
    double a = 0.0;
    for (int i = 0; i < n; ++i) a += M[i][i];
    if (j == 1) return a;
    for (int step = 2; step <= j; ++step) {
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) T[i][k] = M[i][k] - ((i == k) ? a : 0.0);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                double s = 0.0;
                for (int l = 0; l < n; ++l) s += A[i][l] * T[l][k];
                M[i][k] = s;
            }
        double tr = 0.0;
        for (int i = 0; i < n; ++i) tr += M[i][i];
        a = tr / step;
    }
    return (j % 2 == 0) ? -a : a;
}

SymMat hessian_hB(const Vec& x) {
    const int n = x.n;
    double r = x.norm();
    if (r == 0.0) throw_numeric("hessian_hB: singular at the origin");
    SymMat h(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = ((i == j) ? 1.0 : 0.0) - x[i] * x[j] / (r * r);
            h.at(i, j) = v / r;
        }
    return h;
}

double tau(const Vec& grad, const SymMat& hess, int i) {
    const int n = grad.n;
    double g = grad.norm();
    if (g == 0.0) throw_numeric("tau: gradient vanishes (point in argmin)");
    if (i < 0 || i > n - 1) throw_parse("tau: index out of range");
    if (i == 0) return 1.0;
    // Householder reflection H mapping e_1 to the unit gradient; columns 2..n
    // of H span grad-perp.
    Vec gh = grad * (1.0 / g);
    Vec w(n);
    double wn2 = 0.0;
    {
        Vec d = gh;
        d[0] -= 1.0;
        wn2 = d.dot(d);
        w = d;
    }
    double H[kMaxDim][kMaxDim];
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            H[a][b] = ((a == b) ? 1.0 : 0.0) - (wn2 > 1e-300 ? 2.0 * w[a] * w[b] / wn2 : 0.0);
    // B = H^T hess H restricted to rows/cols 2..n, divided by |grad|
    SymMat B(n - 1);
    for (int a = 1; a < n; ++a)
        for (int b = 1; b < n; ++b) {
            double s = 0.0;
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) s += H[p][a] * hess.at(p, q) * H[q][b];
            B.at(a - 1, b - 1) = s / g;
        }
    for (int a = 0; a < n - 1; ++a)
        for (int b = a + 1; b < n - 1; ++b) {
            double v = 0.5 * (B.at(a, b) + B.at(b, a));
            B.set(a, b, v);
        }
    return elem_sym(B, i);
}

double unit_ball_volume(int j) {
    if (j < 0) throw_parse("unit_ball_volume: negative dimension");
    return std::pow(std::numbers::pi, j / 2.0) / std::tgamma(j / 2.0 + 1.0);
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

}  // namespace fivol
