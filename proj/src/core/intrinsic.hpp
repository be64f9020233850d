#pragma once

#include "bodies.hpp"
#include "density.hpp"
#include "funcspec.hpp"

namespace fivol {

enum class Side { Primal, Dual };

enum class Repr {
    Auto,
    SmoothHessian,  // pointwise Hessian of the primal function
    DualHessian,    // mixed Monge-Ampere against 0.5 h_B^2 on the conjugate
    MeasureAlpha,   // Theta_j measure with the transformed density alpha
    TauCurvature,   // argmin atom + curvature integral on the primal side
    Oracle,         // closed forms (u_t / v_t / indicators)
};

struct FivQuery {
    Side side = Side::Primal;
    int j = 0;
    Density zeta;
    SpecPtr f;
    Repr repr = Repr::Auto;
};

// functional intrinsic volume Z_{j,zeta} (primal) / Z*_{j,zeta} (dual)
double fiv(const FivQuery& q);
double fiv(Side side, const SpecPtr& f, int j, const Density& zeta, Repr repr = Repr::Auto);

// Z_{j,zeta}(u_t) = kappa_n C(n,j) R^{n-j} zeta(t), exact
double fiv_oracle_ut(double t, int j, int n, const Density& zeta);

// Z_{j,zeta}(I_K) = kappa_{n-j} R^{n-j} zeta(0) V_j(K), exact
double fiv_indicator(const ClassicalBody& K, int j, const Density& zeta);

// V_j of box + rho B^n via the generalized Steiner formula
double parallel_body_vj(const IndicatorBody& body, int j);

struct CrossCheck {
    double dual_hessian = 0.0;
    double measure_alpha = 0.0;
    double rel_discrepancy = 0.0;
};
CrossCheck cross_representation_check(Side side, const SpecPtr& f, int j, const Density& zeta);

}  // namespace fivol
