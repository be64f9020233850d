#pragma once

#include <functional>
#include <vector>

#include "mat.hpp"

namespace fivol {

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

// Adaptive Gauss-Legendre on [a, b]; panels are split at the given knots
// first, then bisected until the GL15/GL31 difference is below tolerance.
double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-12, const std::vector<double>& knots = {});

// Integral over the unit sphere S^{n-1} (surface measure), n in {1,2,3}.
// Exact for polynomial integrands of moderate degree (<= ~14).
double sphere_integral(int n, const std::function<double(const Vec&)>& f);

}  // namespace fivol
