#include "intrinsic.hpp"

#include <cmath>

#include "measures.hpp"
#include "quad.hpp"

namespace fivol {

namespace {

double r_transform_at(const Density& zeta, int l, double t) {
    Density r = transform_R(zeta, l);
    return t > 0.0 ? r.eval(t) : r.fn.eval_limit0();
}

void require_class(const Density& zeta, int j, int n) {
    if (!class_check(zeta, j, n).member)
        throw_class("density is not in the admissible class for this degree");
}

double binom_or_zero(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    return binomial(n, k);
}

// Z via the conjugate: C(n,j) int zeta(|x|) dMA(v[j], 0.5 h_B^2 [n-j])
double dual_hessian_value(const SpecPtr& v, int j, const Density& zeta) {
    int n = v->n;
    if (j == n) return ma_integral(v, zeta);
    std::vector<std::pair<SpecPtr, int>> args;
    if (j > 0) args.emplace_back(v, j);
    args.emplace_back(make_half_h_squared(n), n - j);
    return binomial(n, j) * mixed_ma_multiset_integral(args, zeta);
}

// pointwise-Hessian evaluation on the primal side; needs C^2 structure
double smooth_hessian_value(const SpecPtr& u, int j, const Density& zeta) {
    int n = u->n;
    double kn = unit_ball_volume(n);
    if (auto rf = as_radial(u)) {
        PiecewiseFn dphi = rf->phi.derivative();
        PiecewiseFn ddphi = dphi.derivative();
        double S = zeta.support_bound();
        for (double r : dphi.knots()) {
            if (r <= 0.0) continue;
            if (std::fabs(dphi.eval(r) - dphi.eval_left(r)) >
                1e-12 * (1.0 + std::fabs(dphi.eval(r))))
                throw_numeric("smooth_hessian: gradient jump in the profile");
        }
        double hi = rf->R;
        if (hi == kInf) {
            hi = 1.0;
            while (hi < 1e9 && dphi.eval(hi) < S) hi *= 2.0;
        } else if (dphi.eval_left(hi) < S) {
            throw_numeric("smooth_hessian: boundary of the domain carries mass");
        }
        double c1 = binom_or_zero(n - 1, n - j);
        double c2 = binom_or_zero(n - 1, n - j - 1);
        auto f = [&](double s) {
            double d1 = dphi.eval(s), d2 = ddphi.eval(s);
            double ratio = d1 / s;
            double ej = c1 * std::pow(ratio, n - j) + c2 * d2 * std::pow(ratio, n - j - 1);
            return zeta.eval(d1) * ej * std::pow(s, n - 1);
        };
        return n * kn * adaptive_integrate(f, 0.0, hi, 1e-11, dphi.knots());
    }
    if (u->variant == Variant::Quadratic) {
        double d = det(u->Q);
        if (d <= 0.0) throw_numeric("smooth_hessian: quadratic part not positive definite");
        double ej = elem_sym(u->Q, n - j);
        auto f = [&](double r) { return zeta.eval(r) * std::pow(r, n - 1); };
        double radial = adaptive_integrate(f, 0.0, zeta.support_bound(), 1e-12, zeta.fn.knots());
        return ej * n * kn * radial / d;
    }
    throw_numeric("smooth_hessian: function is not known to be C^2");
}

}  // namespace

double fiv_oracle_ut(double t, int j, int n, const Density& zeta) {
    if (j < 0 || j > n) throw_numeric("oracle: degree out of range");
    if (t < 0.0) throw_numeric("oracle: negative parameter");
    require_class(zeta, j, n);
    // j = 0 is the constant valuation: the t dependence drops out
    if (j == 0) return unit_ball_volume(n) * r_transform_at(zeta, n, 0.0);
    return unit_ball_volume(n) * binomial(n, j) * r_transform_at(zeta, n - j, t);
}

double fiv_indicator(const ClassicalBody& K, int j, const Density& zeta) {
    int n = K.n;
    require_class(zeta, j, n);
    double vj = classical_intrinsic_volumes(K)[j];
    return unit_ball_volume(n - j) * r_transform_at(zeta, n - j, 0.0) * vj;
}

double parallel_body_vj(const IndicatorBody& body, int j) {
    int n = body.n;
    if (!body.has_box) {
        ClassicalBody K{ClassicalBody::Kind::Ball, n, body.rho, {}};
        return classical_intrinsic_volumes(K)[j];
    }
    ClassicalBody box{ClassicalBody::Kind::Box, n, 0.0, body.box_halfwidths};
    std::vector<double> vk = classical_intrinsic_volumes(box);
    // V_j(K + rho B) = sum_k rho^{j-k} C(n-k, n-j) kappa_{n-k}/kappa_{n-j} V_k(K)
    double acc = 0.0;
    for (int k = 0; k <= j; ++k)
        acc += std::pow(body.rho, j - k) * binom_or_zero(n - k, n - j) *
               unit_ball_volume(n - k) / unit_ball_volume(n - j) * vk[k];
    return acc;
}

double fiv(const FivQuery& q) {
    if (!q.f) throw_numeric("fiv: missing function");
    int n = q.f->n, j = q.j;
    if (j < 0 || j > n) throw_numeric("fiv: degree out of range");
    require_class(q.zeta, j, n);
    if (j == 0) return unit_ball_volume(n) * r_transform_at(q.zeta, n, 0.0);

    auto primal = [&] { return q.side == Side::Primal ? q.f : conjugate(q.f); };
    auto dual = [&] { return q.side == Side::Dual ? q.f : conjugate(q.f); };

    switch (q.repr) {
        case Repr::Oracle: {
            if (q.side == Side::Primal && q.f->variant == Variant::UT)
                return fiv_oracle_ut(q.f->t, j, n, q.zeta);
            if (q.side == Side::Dual && q.f->variant == Variant::VT)
                return fiv_oracle_ut(q.f->t, j, n, q.zeta);
            if (auto body = as_indicator_body(primal()))
                return unit_ball_volume(n - j) * r_transform_at(q.zeta, n - j, 0.0) *
                       parallel_body_vj(*body, j);
            throw_numeric("fiv: no closed-form oracle for this function");
        }
        case Repr::SmoothHessian:
            return smooth_hessian_value(primal(), j, q.zeta);
        case Repr::TauCurvature:
            return theta_star_j_integral(primal(), j, alpha_of_zeta(q.zeta, j, n));
        case Repr::MeasureAlpha:
            return theta_j_integral(dual(), j, alpha_of_zeta(q.zeta, j, n));
        case Repr::DualHessian:
            return dual_hessian_value(dual(), j, q.zeta);
        case Repr::Auto: {
            SpecPtr u = primal();
            if (auto body = as_indicator_body(u))
                return unit_ball_volume(n - j) * r_transform_at(q.zeta, n - j, 0.0) *
                       parallel_body_vj(*body, j);
            return dual_hessian_value(dual(), j, q.zeta);
        }
    }
    throw_numeric("fiv: unknown representation");
}

double fiv(Side side, const SpecPtr& f, int j, const Density& zeta, Repr repr) {
    FivQuery q;
    q.side = side;
    q.j = j;
    q.zeta = zeta;
    q.f = f;
    q.repr = repr;
    return fiv(q);
}

CrossCheck cross_representation_check(Side side, const SpecPtr& f, int j, const Density& zeta) {
    CrossCheck r;
    r.dual_hessian = fiv(side, f, j, zeta, Repr::DualHessian);
    r.measure_alpha = fiv(side, f, j, zeta, Repr::MeasureAlpha);
    double denom = std::max(std::fabs(r.dual_hessian), std::fabs(r.measure_alpha));
    double diff = std::fabs(r.dual_hessian - r.measure_alpha);
    r.rel_discrepancy = denom > 1e-14 ? diff / denom : diff;
    return r;
}

}  // namespace fivol
