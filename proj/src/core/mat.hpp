#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "error.hpp"

namespace fivol {

inline constexpr int kMaxDim = 8;

// Dense vector in R^n, n <= kMaxDim.
struct Vec {
    int n = 0;
    std::array<double, kMaxDim> v{};

    Vec() = default;
    explicit Vec(int dim) : n(dim) {}
    Vec(std::initializer_list<double> xs) : n(static_cast<int>(xs.size())) {
        int i = 0;
        for (double x : xs) v[i++] = x;
    }
    double& operator[](int i) { return v[i]; }
    double operator[](int i) const { return v[i]; }

    double norm() const {
        double s = 0;
        for (int i = 0; i < n; ++i) s += v[i] * v[i];
        return std::sqrt(s);
    }
    double dot(const Vec& o) const {
        double s = 0;
        for (int i = 0; i < n; ++i) s += v[i] * o.v[i];
        return s;
    }
    Vec operator+(const Vec& o) const {
        Vec r(n);
        for (int i = 0; i < n; ++i) r.v[i] = v[i] + o.v[i];
        return r;
    }
    Vec operator-(const Vec& o) const {
        Vec r(n);
        for (int i = 0; i < n; ++i) r.v[i] = v[i] - o.v[i];
        return r;
    }
    Vec operator*(double a) const {
        Vec r(n);
        for (int i = 0; i < n; ++i) r.v[i] = v[i] * a;
        return r;
    }
};

// Symmetric n x n matrix, n <= kMaxDim. Stored densely; symmetry is
// maintained by set().
struct SymMat {
    int n = 0;
    std::array<double, kMaxDim * kMaxDim> a{};

    SymMat() = default;
    explicit SymMat(int dim) : n(dim) {}

    static SymMat identity(int dim) {
        SymMat m(dim);
        for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
        return m;
    }
    static SymMat diag(std::initializer_list<double> d) {
        SymMat m(static_cast<int>(d.size()));
        int i = 0;
        for (double x : d) m.at(i, i) = x, ++i;
        return m;
    }

    double& at(int i, int j) { return a[i * kMaxDim + j]; }
    double at(int i, int j) const { return a[i * kMaxDim + j]; }
    void set(int i, int j, double x) { at(i, j) = x; at(j, i) = x; }

    SymMat operator+(const SymMat& o) const {
        SymMat r(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r.at(i, j) = at(i, j) + o.at(i, j);
        return r;
    }
    SymMat operator*(double s) const {
        SymMat r(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r.at(i, j) = at(i, j) * s;
        return r;
    }
    double trace() const {
        double t = 0;
        for (int i = 0; i < n; ++i) t += at(i, i);
        return t;
    }
};

// Determinant by LU with partial pivoting.
double det(const SymMat& m);

// Inverse of a (symmetric) matrix; throws on singular input.
SymMat inverse(const SymMat& m);

// Mixed discriminant det(A_1,...,A_n) of n symmetric n x n matrices,
// evaluated by inclusion-exclusion over subset sums (2^n - 1 determinants).
double mixed_discriminant(std::span<const SymMat> mats);

// k-th elementary symmetric function of the eigenvalues, via
// Faddeev-LeVerrier characteristic-polynomial coefficients.
// elem_sym(A, 0) == 1, elem_sym(A, 1) == trace, elem_sym(A, n) == det.
double elem_sym(const SymMat& m, int j);

// Hessian of x -> |x| at x != 0: (1/|x|)(I - x^ (x) x^).
SymMat hessian_hB(const Vec& x);

// i-th elementary symmetric function of the principal curvatures of the
// sublevel set through x, from the gradient and Hessian of the function.
// tau(..., 0) == 1.
double tau(const Vec& grad, const SymMat& hess, int i);

// Volume of the unit ball in R^j (kappa_0 = 1).
double unit_ball_volume(int j);

double binomial(int n, int k);

}  // namespace fivol
