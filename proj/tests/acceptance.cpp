// Acceptance gate: one line per criterion, nonzero exit on any failure.
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "intrinsic.hpp"
#include "measures.hpp"
#include "quad.hpp"
#include "steiner.hpp"

using namespace fivol;

namespace {

int g_failures = 0;

void report(int k, bool ok, const std::string& what) {
    std::printf("ACCEPTANCE %d: %s - %s\n", k, ok ? "PASS" : "FAIL", what.c_str());
    if (!ok) ++g_failures;
}

bool close(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

Density random_density(std::mt19937& rng) {
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    std::uniform_real_distribution<double> len(0.2, 1.0);
    double a = len(rng), b = a + len(rng);
    PiecewiseFn f = PiecewiseFn::poly(0.0, a, {c(rng), c(rng), c(rng)});
    f = add(f, PiecewiseFn::poly(a, b, {c(rng), c(rng)}));
    return Density{f};
}

SymMat random_sym(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    SymMat m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m.set(i, j, d(rng));
    return m;
}

double mixed_by_columns(const std::vector<SymMat>& mats) {
    int n = mats[0].n;
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    double acc = 0.0;
    int count = 0;
    do {
        SymMat m(n);
        for (int col = 0; col < n; ++col)
            for (int row = 0; row < n; ++row) m.at(row, col) = mats[perm[col]].at(row, col);
        acc += det(m);
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc / count;
}

// 1: oracle values of u_t against the symbolic transform closed form
void criterion1() {
    Density hat = hat_density();
    bool ok = true;
    for (int n = 1; n <= 3 && ok; ++n)
        for (int j = 0; j <= n && ok; ++j)
            for (int k = 0; k <= 10 && ok; ++k) {
                double t = k / 10.0;
                double expect = j == 0 ? unit_ball_volume(n) / (n + 1)
                                       : unit_ball_volume(n) * binomial(n, j) *
                                             (1.0 - std::pow(t, n - j + 1)) / (n - j + 1);
                if (!close(fiv_oracle_ut(t, j, n, hat), expect, 1e-8)) ok = false;
                if (!close(fiv(Side::Primal, make_ut(n, t), j, hat), expect, 1e-8)) ok = false;
            }
    report(1, ok, "oracle suite for u_t, n = 1..3, t = 0..1, tol 1e-8");
}

// 2: Steiner formula on the reference catalog + closed form for the left side
void criterion2() {
    Density hat = hat_density();
    bool ok = true;
    for (int n : {2, 3}) {
        double tol = n == 2 ? 1e-7 : 1e-6;
        std::vector<SpecPtr> cat = {make_ut(n, 0.5), make_indicator_ball(n, 1.0),
                                    make_half_h_squared(n)};
        for (const auto& u : cat) {
            auto rep = steiner_verify(u, hat, default_r_nodes(n));
            if (!rep.polynomiality_ok) ok = false;
            for (double e : rep.per_coefficient_rel_error)
                if (!(e < tol)) ok = false;
        }
        auto nodes = default_r_nodes(n);
        auto rep = steiner_verify(make_ut(n, 0.5), hat, nodes);
        double kn = unit_ball_volume(n);
        for (size_t i = 0; i < nodes.size(); ++i) {
            double expect = kn * std::pow(nodes[i], n);
            for (int j = 1; j <= n; ++j)
                expect += kn * 0.5 * binomial(n, j) * std::pow(nodes[i], n - j);
            if (!close(rep.lhs_values[i], expect, 1e-8)) ok = false;
        }
    }
    report(2, ok, "Steiner verification on u_t, I_B, half square, n = 2, 3");
}

// 3: classical intrinsic volumes retrieved from indicator coefficients
void criterion3() {
    Density hat = hat_density();
    bool ok = true;
    std::vector<ClassicalBody> bodies = {
        {ClassicalBody::Kind::Ball, 2, 1.0, Vec{}},
        {ClassicalBody::Kind::Ball, 3, 1.0, Vec{}},
        {ClassicalBody::Kind::Box, 2, 0.0, Vec{0.5, 0.5}},
        {ClassicalBody::Kind::Box, 3, 0.0, Vec{0.5, 0.5, 0.5}},
    };
    for (const auto& K : bodies) {
        auto rep = classical_steiner_retrieve(K, hat, default_r_nodes(K.n));
        auto vj = classical_intrinsic_volumes(K);
        for (size_t j = 0; j < vj.size(); ++j)
            if (!close(rep.recovered_vj[j], vj[j], 1e-8)) ok = false;
    }
    report(3, ok, "classical retrieval for ball and box, n = 2, 3, tol 1e-8");
}

// 4: bijectivity of the R transforms on random densities
void criterion4() {
    std::mt19937 rng(101);
    bool ok = true;
    for (int l = 0; l <= 3; ++l)
        for (int trial = 0; trial < 20; ++trial) {
            Density z = random_density(rng);
            if (!density_equal(z, transform_R_inv(transform_R(z, l), l), 1e-10)) ok = false;
            Density rho = transform_R(z, l);
            if (!density_equal(rho, transform_R(transform_R_inv(rho, l), l), 1e-10)) ok = false;
        }
    report(4, ok, "R transform bijection, 20 random densities per order 0..3");
}

// 5: Hessian measure identities
void criterion5() {
    Density hat = hat_density();
    bool ok = true;
    // Theta_0 mass
    for (const auto& v : {make_vt(2, 0.3), make_half_h_squared(2), make_vt(3, 0.6)})
        if (!close(theta_j_integral(v, 0, hat), unit_ball_volume(v->n), 1e-12)) ok = false;
    // atoms of Theta*_j at the origin
    double r0 = 0.6;
    PiecewiseFn flat = add(PiecewiseFn::poly(0.0, r0, {0.0}),
                           PiecewiseFn::poly(r0, kInf, {r0 * r0 / 2.0, -r0, 0.5}));
    auto uflat = make_radial(2, flat);
    ClassicalBody disk{ClassicalBody::Kind::Ball, 2, r0, Vec{}};
    auto vj = classical_intrinsic_volumes(disk);
    for (int j = 0; j <= 2; ++j)
        if (!close(theta_star_atom(uflat, j),
                   unit_ball_volume(2 - j) / binomial(2, j) * vj[j], 1e-10))
            ok = false;
    // gradient-image integral of u_t
    for (int n : {1, 2, 3})
        for (double t : {0.2, 0.7})
            if (!close(conj_ma_integral(make_ut(n, t), hat),
                       unit_ball_volume(n) * hat.eval(t), 1e-9))
                ok = false;
    // conjugation duality of the measures
    for (const auto& u : {make_ut(2, 0.5), make_half_h_squared(2), make_ut(3, 0.3)})
        for (int j = 1; j <= u->n; ++j)
            if (!close(theta_star_j_integral(u, j, hat),
                       theta_j_integral(conjugate(u), j, hat), 1e-8))
                ok = false;
    report(5, ok, "Hessian measure identities: mass, atoms, duality");
}

// 6: cross-representation agreement
void criterion6() {
    std::mt19937 rng(103);
    bool ok = true;
    for (int n : {2, 3})
        for (int j = 1; j < n; ++j) {
            Density z = random_density(rng);
            for (auto& pc : z.fn.pieces)
                for (auto& t : pc.terms) t.c = std::fabs(t.c) + 0.1;
            for (double t : {0.2, 0.5, 0.8})
                if (cross_representation_check(Side::Dual, make_vt(n, t), j, z).rel_discrepancy >=
                    1e-8)
                    ok = false;
            SymMat q = SymMat::identity(n);
            for (int i = 0; i < n; ++i) q.at(i, i) = 0.6 + 0.4 * i;
            if (cross_representation_check(Side::Dual, make_quadratic(q, Vec(n), 0.0), j, z)
                    .rel_discrepancy >= 1e-8)
                ok = false;
        }
    report(6, ok, "cross-representation agreement on v_t and quadratics, tol 1e-8");
}

// 7: mixed discriminant against the permutation oracle
void criterion7() {
    std::mt19937 rng(107);
    bool ok = true;
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + (int)(rng() % 4);
        std::vector<SymMat> mats;
        for (int i = 0; i < n; ++i) mats.push_back(random_sym(rng, n));
        double d1 = mixed_discriminant(mats);
        if (!close(d1, mixed_by_columns(mats), 1e-9)) ok = false;
        std::vector<SymMat> sh = mats;
        std::shuffle(sh.begin(), sh.end(), rng);
        if (!close(mixed_discriminant(sh), d1, 1e-9)) ok = false;
    }
    report(7, ok, "mixed discriminant property suite, 200 random cases, n <= 5");
}

// 8: Jacobian expansion det(I + r D nu) = sum r^i tau_i
void criterion8() {
    std::mt19937 rng(109);
    std::uniform_real_distribution<double> pt(-1.5, 1.5);
    bool ok = true;
    int done = 0;
    auto run = [&](const SpecPtr& u, int want) {
        int n = u->n;
        auto nu = [&](const Vec& x) {
            Vec g = gradient(u, x);
            return g * (1.0 / g.norm());
        };
        int made = 0;
        while (made < want) {
            Vec x(n);
            for (int i = 0; i < n; ++i) x[i] = pt(rng);
            if (x.norm() < 0.2) continue;
            Vec g = gradient(u, x);
            if (g.norm() < 1e-6) continue;
            SymMat hess = hessian(u, x);
            for (double r : {0.1, 0.5}) {
                double eps = 1e-6;
                SymMat J(n);
                for (int c = 0; c < n; ++c) {
                    Vec xp = x, xm = x;
                    xp[c] += eps;
                    xm[c] -= eps;
                    Vec np = nu(xp), nm = nu(xm);
                    for (int rw = 0; rw < n; ++rw)
                        J.at(rw, c) = (rw == c ? 1.0 : 0.0) + r * (np[rw] - nm[rw]) / (2 * eps);
                }
                double rhs = 0.0;
                for (int i = 0; i < n; ++i) rhs += std::pow(r, i) * tau(g, hess, i);
                if (!close(det(J), rhs, 1e-5)) ok = false;
            }
            ++made;
            ++done;
        }
    };
    run(make_radial(2, PiecewiseFn::poly(0.0, kInf, {0.0, 1.0, 0.5})), 40);
    SymMat q = SymMat::diag({2.0, 1.0, 0.5});
    q.set(0, 1, 0.3);
    run(make_quadratic(q, Vec{0.1, -0.2, 0.05}, 0.0), 60);
    report(8, ok && done >= 100, "Jacobian expansion by finite differences, 100 points, tol 1e-5");
}

// 9: general-phi solver: equation residual and divergence detection
void criterion9() {
    Density hat = hat_density();
    bool ok = true;
    auto residual_ok = [&](const Density& alpha, const PhiProfile& phi, int j, int n) {
        BetaSolution sol;
        try {
            sol = general_phi_beta_solve(alpha, phi, j, n);
        } catch (const Error&) {
            return false;
        }
        auto phi_p = phi.phi.derivative();
        auto phi_pp = phi_p.derivative();
        double kn = unit_ball_volume(n);
        double scale = std::max(1.0, std::fabs(alpha.fn.eval_limit0()));
        for (int k = 1; k <= 50; ++k) {
            double t = sol.support_bound * k / 51.0;
            double tail =
                n - j == 0
                    ? 0.0
                    : adaptive_integrate(
                          [&](double s) {
                              return sol.eval(s) * phi_pp.eval(s) *
                                     std::pow(phi_p.eval(s), n - j - 1);
                          },
                          t, sol.support_bound, 1e-12, {});
            double lhs = kn * (sol.eval(t) * std::pow(phi_p.eval(t), n - j) + (n - j) * tail);
            if (std::fabs(lhs - alpha.eval(t)) > 1e-9 * scale) return false;
        }
        return true;
    };
    PhiProfile lin{PiecewiseFn::poly(0.0, kInf, {0.0, 1.0})};
    PhiProfile tpt2{PiecewiseFn::poly(0.0, kInf, {0.0, 1.0, 1.0})};
    PhiProfile halfsq{PiecewiseFn::poly(0.0, kInf, {0.0, 0.0, 0.5})};
    Density fast{PiecewiseFn::poly(0.0, 1.0, {0.0, 0.0, 1.0, -1.0})};  // s^2 (1-s)
    if (!residual_ok(hat, lin, 1, 2)) ok = false;
    if (!residual_ok(hat, tpt2, 1, 2)) ok = false;
    if (!residual_ok(fast, halfsq, 1, 2)) ok = false;
    bool threw = false;
    try {
        general_phi_beta_solve(hat, halfsq, 1, 2);
    } catch (const Error& e) {
        threw = e.code() == ErrorCode::Numeric;
    }
    if (!threw) ok = false;
    report(9, ok, "general-phi solver residuals at 50 points, divergence detected");
}

// 10: valuation and invariance properties, randomized
void criterion10() {
    Density hat = hat_density();
    std::mt19937 rng(113);
    std::uniform_real_distribution<double> d(-0.5, 0.5);
    std::uniform_real_distribution<double> lam(1.1, 3.0);
    bool ok = true;
    for (int trial = 0; trial < 50; ++trial) {
        // epi-translation invariance
        double t = 0.2 + 0.2 * (trial % 3);
        auto u = make_ut(2, t);
        auto shifted = make_shift(u, Vec{d(rng), d(rng)}, d(rng));
        for (int j = 0; j <= 2; ++j)
            if (!close(fiv(Side::Primal, shifted, j, hat), fiv(Side::Primal, u, j, hat), 1e-7))
                ok = false;
        // valuation on ordered pairs
        auto f = make_sum({{lam(rng), make_half_h_squared(2)}});
        auto g = make_half_h_squared(2);
        auto mm = pointwise_min_max(f, g);
        if (!mm) {
            ok = false;
            continue;
        }
        for (int j = 1; j <= 2; ++j) {
            double lhs =
                fiv(Side::Dual, mm->first, j, hat) + fiv(Side::Dual, mm->second, j, hat);
            double rhs = fiv(Side::Dual, f, j, hat) + fiv(Side::Dual, g, j, hat);
            if (!close(lhs, rhs, 1e-7)) ok = false;
        }
    }
    report(10, ok, "valuation and epi-translation invariance, 50 randomized cases, tol 1e-7");
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    return g_failures == 0 ? 0 : 1;
}
