#include "quad.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace fivol {

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    auto it = cache.find(order);
    if (it == cache.end()) {
        std::vector<double> x(order), w(order);
        for (int i = 0; i < order; ++i) {
            // Newton from the Chebyshev-based initial guess
            double t = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = t;
                for (int k = 2; k <= order; ++k) {
                    double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                double dp = order * (t * p1 - p0) / (t * t - 1.0);
                double dt = p1 / dp;
                t -= dt;
                if (std::fabs(dt) < 1e-16) break;
            }
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= order; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = order * (t * p1 - p0) / (t * t - 1.0);
            x[i] = t;
            w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
        it = cache.emplace(order, std::make_pair(std::move(x), std::move(w))).first;
    }
    nodes = it->second.first;
    weights = it->second.second;
}

namespace {

double gl_panel(const std::function<double(double)>& f, double a, double b, int order) {
    std::vector<double> x, w;
    gauss_legendre(order, x, w);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < order; ++i) s += w[i] * f(mid + half * x[i]);
    return s * half;
}

double adapt(const std::function<double(double)>& f, double a, double b, double abs_tol,
             int depth) {
    double coarse = gl_panel(f, a, b, 15);
    double fine = gl_panel(f, a, b, 31);
    double err = std::fabs(fine - coarse);
    // the 1e-14 relative floor stops splitting once the estimate difference
    // is dominated by rounding noise of a large integrand
    if (err <= abs_tol || err <= 1e-14 * std::fabs(fine) || depth >= 30 ||
        (b - a) < 1e-14 * std::max(1.0, std::fabs(a) + std::fabs(b)))
        return fine;
    double m = 0.5 * (a + b);
    return adapt(f, a, m, 0.5 * abs_tol, depth + 1) + adapt(f, m, b, 0.5 * abs_tol, depth + 1);
}

}  // namespace

double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, const std::vector<double>& knots) {
    if (b <= a) return 0.0;
    std::vector<double> cuts{a, b};
    for (double k : knots)
        if (k > a && k < b) cuts.push_back(k);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    // first pass for a scale estimate
    double scale = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
        scale += std::fabs(gl_panel(f, cuts[i], cuts[i + 1], 15));
    double abs_tol = rel_tol * std::max(scale, 1e-30);
    double total = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
        total += adapt(f, cuts[i], cuts[i + 1], abs_tol / (cuts.size() - 1), 0);
    return total;
}

double sphere_integral(int n, const std::function<double(const Vec&)>& f) {
    if (n == 1) {
        Vec p{1.0}, m{-1.0};
        return f(p) + f(m);
    }
    if (n == 2) {
        const int m = 256;
        double s = 0.0;
        for (int i = 0; i < m; ++i) {
            double th = 2.0 * std::numbers::pi * i / m;
            Vec y{std::cos(th), std::sin(th)};
            s += f(y);
        }
        return s * (2.0 * std::numbers::pi / m);
    }
    if (n == 3) {
        // product rule: Gauss-Legendre in z, trapezoid in azimuth
        std::vector<double> x, w;
        gauss_legendre(16, x, w);
        const int m = 32;
        double s = 0.0;
        for (int i = 0; i < 16; ++i) {
            double z = x[i];
            double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            double ring = 0.0;
            for (int k = 0; k < m; ++k) {
                double th = 2.0 * std::numbers::pi * k / m;
                Vec y{rho * std::cos(th), rho * std::sin(th), z};
                ring += f(y);
            }
            s += w[i] * ring * (2.0 * std::numbers::pi / m);
        }
        return s;
    }
    throw_numeric("sphere_integral: only n <= 3 supported");
}

}  // namespace fivol
