#pragma once

#include <functional>
#include <vector>

#include "bodies.hpp"
#include "density.hpp"
#include "funcspec.hpp"

namespace fivol {

struct SteinerReport {
    int n = 0;
    std::vector<double> r_nodes;
    std::vector<double> lhs_values;            // one per node
    std::vector<double> rhs_coefficients;      // indexed by j = 0..n
    std::vector<double> fitted_coefficients;   // indexed by j (coefficient of r^{n-j})
    std::vector<double> per_coefficient_rel_error;
    std::vector<double> recovered_vj;          // classical retrieval only
    double fit_residual = 0.0;
    bool polynomiality_ok = true;
};

// convex C^2-ish scalar profile for the general-phi Steiner machinery
struct PhiProfile {
    PiecewiseFn phi;  // piecewise polynomial on [0, inf), degree <= 6
};

// numeric solution of the general-phi integral equation; beta is typically
// outside the piecewise-polynomial family, so it is exposed as an evaluator
struct BetaSolution {
    std::function<double(double)> eval;
    double support_bound = 0.0;
    double max_validation_error = 0.0;
};

std::vector<double> default_r_nodes(int n);  // Chebyshev, n+3 points on [0.1, 2.1]

// Z_{n,zeta}(u inf-conv r * I_B) vs sum_j r^{n-j} kappa_{n-j} Z_{j,zeta_j}(u)
SteinerReport steiner_verify(const SpecPtr& u, const Density& zeta,
                             const std::vector<double>& r_nodes);

// dual mirror: Z*_{n,zeta}(v + r h_B) vs sum_j r^{n-j} kappa_{n-j} Z*_{j,zeta_j}(v)
SteinerReport dual_steiner_verify(const SpecPtr& v, const Density& zeta,
                                  const std::vector<double>& r_nodes);

// quadratic expansion: Z*_{n,zeta}(v + 0.5 r h_B^2) = sum_j r^{n-j} Z*_{j,zeta}(v)
SteinerReport dual_steiner_quadratic_verify(const SpecPtr& v, const Density& zeta,
                                            const std::vector<double>& r_nodes);

// derivative-form corollary; returns the extracted value and checks it
// against the direct evaluation of Z_{j,zeta}(u)
double steiner_derivative_extract(const SpecPtr& u, int j, const Density& zeta);

// solve kappa_n (beta(t) phi'(t)^{n-j} + (n-j) int_t^inf beta phi'^{n-j-1} phi'')
// = alpha(t) for beta; throws when beta blows up near 0 (phi'(0) = 0 case)
BetaSolution general_phi_beta_solve(const Density& alpha, const PhiProfile& phi, int j, int n);

// classical Steiner retrieval: V_j(K) from the fitted coefficients of I_K
SteinerReport classical_steiner_retrieve(const ClassicalBody& K, const Density& zeta,
                                         const std::vector<double>& r_nodes);

}  // namespace fivol
