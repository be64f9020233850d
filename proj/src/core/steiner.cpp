#include "steiner.hpp"

#include <cmath>

#include "intrinsic.hpp"
#include "measures.hpp"
#include "quad.hpp"

namespace fivol {

namespace {

constexpr double kPi = 3.14159265358979323846;

SteinerReport assemble(int n, const std::vector<double>& r_nodes,
                       const std::vector<double>& lhs, std::vector<double> rhs_by_j) {
    SteinerReport rep;
    rep.n = n;
    rep.r_nodes = r_nodes;
    rep.lhs_values = lhs;
    rep.rhs_coefficients = std::move(rhs_by_j);
    auto coeffs = polyfit(r_nodes, lhs, n, &rep.fit_residual);
    rep.fitted_coefficients.resize(n + 1);
    for (int j = 0; j <= n; ++j) rep.fitted_coefficients[j] = coeffs[n - j];
    double scale = 1.0;
    for (double v : lhs) scale = std::max(scale, std::fabs(v));
    rep.polynomiality_ok = rep.fit_residual <= 1e-6 * scale;
    for (int j = 0; j <= n; ++j) {
        double denom = std::max(std::fabs(rep.rhs_coefficients[j]), 1e-12);
        rep.per_coefficient_rel_error.push_back(
            std::fabs(rep.fitted_coefficients[j] - rep.rhs_coefficients[j]) / denom);
    }
    return rep;
}

void check_nodes(int n, const std::vector<double>& r_nodes) {
    if ((int)r_nodes.size() < n + 1) throw_numeric("steiner: need at least n+1 nodes");
    for (double r : r_nodes)
        if (r <= 0.0) throw_numeric("steiner: nodes must be positive");
}

}  // namespace

std::vector<double> default_r_nodes(int n) {
    int m = n + 3;
    std::vector<double> r;
    for (int k = 0; k < m; ++k)
        r.push_back(1.1 + std::cos((2 * k + 1) * kPi / (2 * m)));
    std::sort(r.begin(), r.end());
    return r;
}

SteinerReport steiner_verify(const SpecPtr& u, const Density& zeta,
                             const std::vector<double>& r_nodes) {
    int n = u->n;
    check_nodes(n, r_nodes);
    auto zs = steiner_densities(zeta, n);
    SpecPtr ball = make_indicator_ball(n, 1.0);
    std::vector<double> lhs;
    for (double r : r_nodes)
        lhs.push_back(fiv(Side::Primal, inf_convolve(u, epi_scale(r, ball)), n, zeta));
    std::vector<double> rhs(n + 1);
    for (int j = 0; j <= n; ++j)
        rhs[j] = unit_ball_volume(n - j) * fiv(Side::Primal, u, j, zs[j]);
    return assemble(n, r_nodes, lhs, std::move(rhs));
}

SteinerReport dual_steiner_verify(const SpecPtr& v, const Density& zeta,
                                  const std::vector<double>& r_nodes) {
    int n = v->n;
    check_nodes(n, r_nodes);
    auto zs = steiner_densities(zeta, n);
    SpecPtr hb = make_support_ball(n, 1.0);
    std::vector<double> lhs;
    for (double r : r_nodes)
        lhs.push_back(fiv(Side::Dual, make_sum({{1.0, v}, {r, hb}}), n, zeta));
    std::vector<double> rhs(n + 1);
    for (int j = 0; j <= n; ++j)
        rhs[j] = unit_ball_volume(n - j) * fiv(Side::Dual, v, j, zs[j]);
    return assemble(n, r_nodes, lhs, std::move(rhs));
}

SteinerReport dual_steiner_quadratic_verify(const SpecPtr& v, const Density& zeta,
                                            const std::vector<double>& r_nodes) {
    int n = v->n;
    check_nodes(n, r_nodes);
    SpecPtr hb2 = make_half_h_squared(n);
    std::vector<double> lhs;
    for (double r : r_nodes)
        lhs.push_back(fiv(Side::Dual, make_sum({{1.0, v}, {r, hb2}}), n, zeta));
    std::vector<double> rhs(n + 1);
    for (int j = 0; j <= n; ++j) rhs[j] = fiv(Side::Dual, v, j, zeta);
    return assemble(n, r_nodes, lhs, std::move(rhs));
}

double steiner_derivative_extract(const SpecPtr& u, int j, const Density& zeta) {
    int n = u->n;
    if (j < 0 || j > n) throw_numeric("derivative extract: degree out of range");
    Density alpha = alpha_of_zeta(zeta, j, n);
    std::vector<double> nodes = default_r_nodes(n);
    SpecPtr ball = make_indicator_ball(n, 1.0);
    std::vector<double> lhs;
    for (double r : nodes)
        lhs.push_back(fiv(Side::Primal, inf_convolve(u, epi_scale(r, ball)), n, alpha));
    auto coeffs = polyfit(nodes, lhs, n);
    double value = coeffs[n - j] / binomial(n, j);
    double direct = fiv(Side::Primal, u, j, zeta);
    double denom = std::max({std::fabs(direct), std::fabs(value), 1e-12});
    if (std::fabs(value - direct) / denom > 1e-6)
        throw_tolerance("derivative extract disagrees with direct evaluation");
    return value;
}

BetaSolution general_phi_beta_solve(const Density& alpha, const PhiProfile& phi, int j, int n) {
    if (j < 0 || j > n) throw_numeric("beta solve: degree out of range");
    PiecewiseFn dphi = phi.phi.derivative();
    PiecewiseFn ddphi = dphi.derivative();
    double S = alpha.support_bound();
    double kn = unit_ball_volume(n);
    int m = n - j;

    std::vector<double> knots = alpha.fn.knots();
    for (double k : dphi.knots()) knots.push_back(k);

    auto beta = [=](double t) {
        if (t >= S) return 0.0;
        double d = dphi.eval(t);
        if (d <= 0.0) throw_numeric("beta solve: phi' vanishes at a positive argument");
        double head = alpha.eval(t) / std::pow(d, m);
        double tail = 0.0;
        if (m > 0) {
            auto f = [&](double r) {
                return alpha.eval(r) * ddphi.eval(r) / std::pow(dphi.eval(r), m + 1);
            };
            tail = m * adaptive_integrate(f, t, S, 1e-11, knots);
        }
        return (head - tail) / kn;
    };

    // blow-up detector for the phi'(0) = 0 scenario: sample toward 0 and
    // flag increments that fail to decay (covers both 1/t and log growth)
    {
        double v1 = std::fabs(beta(1e-1)), v2 = std::fabs(beta(1e-2));
        double v3 = std::fabs(beta(1e-3)), v4 = std::fabs(beta(1e-4));
        double d2 = v3 - v2, d3 = v4 - v3;
        double scale = std::max(1.0, v1);
        if (d2 > 1e-6 * scale && d3 > 0.5 * d2)
            throw_numeric("beta solve: solution diverges near 0");
    }

    BetaSolution sol;
    sol.support_bound = S;
    // substitute back into the integral equation at sample points
    for (int i = 0; i < 50; ++i) {
        double t = S * (i + 0.5) / 50.0;
        double d = dphi.eval(t);
        double tail = 0.0;
        if (m > 0) {
            auto f = [&](double r) {
                return beta(r) * std::pow(dphi.eval(r), m - 1) * ddphi.eval(r);
            };
            tail = m * adaptive_integrate(f, t, S, 1e-10, knots);
        }
        double lhs = kn * (beta(t) * std::pow(d, m) + tail);
        sol.max_validation_error = std::max(sol.max_validation_error,
                                            std::fabs(lhs - alpha.eval(t)));
    }
    double ascale = 0.0;
    for (int i = 0; i < 50; ++i)
        ascale = std::max(ascale, std::fabs(alpha.eval(S * (i + 0.5) / 50.0)));
    if (sol.max_validation_error > 1e-9 * std::max(1.0, ascale))
        throw_numeric("beta solve: substitution check failed");
    sol.eval = beta;
    return sol;
}

SteinerReport classical_steiner_retrieve(const ClassicalBody& K, const Density& zeta,
                                         const std::vector<double>& r_nodes) {
    double z0 = zeta.fn.eval_limit0();
    if (std::fabs(z0) < 1e-14) throw_numeric("classical retrieval: zeta(0) = 0 is degenerate");
    SteinerReport rep = steiner_verify(body_indicator(K), zeta, r_nodes);
    int n = rep.n;
    for (int j = 0; j <= n; ++j)
        rep.recovered_vj.push_back(rep.fitted_coefficients[j] / (z0 * unit_ball_volume(n - j)));
    return rep;
}

}  // namespace fivol
