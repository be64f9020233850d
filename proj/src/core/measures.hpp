#pragma once

#include <vector>

#include "density.hpp"
#include "funcspec.hpp"

namespace fivol {

// int beta(|x|) dMA(v; x) for a finite convex v (radial + quadratic carrier)
double ma_integral(const SpecPtr& v, const Density& beta);

// int beta(|x|) dMA(v_1,...,v_n; x), mixed Monge-Ampere measure
double mixed_ma_integral(const std::vector<SpecPtr>& vs, const Density& beta);

// same with multiplicities (v, count); counts must sum to n
double mixed_ma_multiset_integral(const std::vector<std::pair<SpecPtr, int>>& args,
                                  const Density& beta);

// int_{dom u} beta(|grad u|) dx for supercoercive u
double conj_ma_integral(const SpecPtr& u, const Density& beta);

// int alpha(|x|) dTheta_j(v; x), Theta_j = MA(v[j], h_B[n-j]; .)
double theta_j_integral(const SpecPtr& v, int j, const Density& alpha);

// int alpha(|y|) dTheta*_j(u; y) = theta_j_integral(u*, j, alpha)
double theta_star_j_integral(const SpecPtr& u, int j, const Density& alpha);

// mass of the atom of Theta*_j at the origin, from V_j(argmin u)
double theta_star_atom(const SpecPtr& u, int j);

struct MaSteinerReport {
    std::vector<double> r_nodes;
    std::vector<double> values;       // MA(v + r h_B) integrals
    std::vector<double> fitted;       // coefficients of r^k, k = 0..n
    std::vector<double> reference;    // C(n,j) Theta_j integrals at k = n-j
    std::vector<double> rel_error;
    double fit_residual = 0.0;
};

// Steiner expansion MA(v + r h_B) = sum_j C(n,j) r^{n-j} Theta_j(v)
MaSteinerReport ma_steiner_expand(const SpecPtr& v, const Density& beta,
                                  const std::vector<double>& r_nodes);

// least-squares polynomial fit; returns coefficients of x^0..x^deg
std::vector<double> polyfit(const std::vector<double>& xs, const std::vector<double>& ys,
                            int deg, double* residual = nullptr);

}  // namespace fivol
