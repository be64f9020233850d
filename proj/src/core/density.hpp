#pragma once

#include <string>
#include <vector>

#include "pwfn.hpp"

namespace fivol {

// A density zeta on (0, inf) with bounded support, represented exactly.
struct Density {
    PiecewiseFn fn;

    double eval(double s) const { return fn.eval(s); }
    double support_bound() const { return fn.support_end(); }
    bool is_zero() const { return fn.pieces.empty(); }
};

struct HadClassCheck {
    int j = 0;
    bool s_pow_finite = false;
    double limit_s_pow = 0.0;      // lim s^{n-j} zeta(s)
    bool integral_finite = false;
    double limit_integral = 0.0;   // lim int_s^inf t^{n-j-1} zeta(t) dt
    bool member = false;
};

// Membership test for Had^n_j.
HadClassCheck class_check(const Density& zeta, int j, int n);

// R^l zeta(s) = s^l zeta(s) + l int_s^inf t^{l-1} zeta(t) dt, exact.
Density transform_R(const Density& zeta, int l);

// R^{-l} rho(s) = rho(s)/s^l - l int_s^inf rho(t)/t^{l+1} dt, exact.
Density transform_R_inv(const Density& rho, int l);

// zeta_j = (1/kappa_{n-j}) R^{-(n-j)} zeta for j = 0..n (zeta in Had^n_n).
std::vector<Density> steiner_densities(const Density& zeta, int n);

// alpha = C(n,j) R^{n-j} zeta, extended continuously to 0 (zeta in Had^n_j).
Density alpha_of_zeta(const Density& zeta, int j, int n);

// hat density (1-s)_+ on [0,1]
Density hat_density();

bool density_equal(const Density& a, const Density& b, double tol = 1e-12);

std::string density_to_json(const Density& d);
Density density_from_json(const std::string& text);

}  // namespace fivol
