#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "intrinsic.hpp"
#include "quad.hpp"
#include "steiner.hpp"

using namespace fivol;

TEST_CASE("default node set") {
    for (int n : {1, 2, 3}) {
        auto nodes = default_r_nodes(n);
        REQUIRE((int)nodes.size() == n + 3);
        for (size_t i = 0; i + 1 < nodes.size(); ++i) CHECK(nodes[i] < nodes[i + 1]);
        CHECK(nodes.front() >= 0.09);
        CHECK(nodes.back() <= 2.11);
    }
}

TEST_CASE("Steiner formula on the reference catalog") {
    Density hat = hat_density();
    for (int n : {2, 3}) {
        std::vector<SpecPtr> cat = {make_ut(n, 0.5), make_indicator_ball(n, 1.0),
                                    make_half_h_squared(n)};
        for (const auto& u : cat) {
            auto rep = steiner_verify(u, hat, default_r_nodes(n));
            CHECK(rep.polynomiality_ok);
            for (double e : rep.per_coefficient_rel_error) CHECK(e < (n == 2 ? 1e-7 : 1e-6));
        }
    }
}

TEST_CASE("Steiner left side matches the closed form for u_t") {
    // Z_n(u_t inf-conv r I_B) = kappa_n r^n zeta(0) + kappa_n zeta(t) sum_{j>=1} C(n,j) r^{n-j}
    Density hat = hat_density();
    double t = 0.5;
    for (int n : {2, 3}) {
        auto nodes = default_r_nodes(n);
        auto rep = steiner_verify(make_ut(n, t), hat, nodes);
        double kn = unit_ball_volume(n);
        for (size_t i = 0; i < nodes.size(); ++i) {
            double r = nodes[i];
            double expect = kn * std::pow(r, n) * 1.0;  // zeta(0) = 1
            for (int j = 1; j <= n; ++j)
                expect += kn * hat.eval(t) * binomial(n, j) * std::pow(r, n - j);
            CHECK(rep.lhs_values[i] == doctest::Approx(expect).epsilon(1e-8));
        }
    }
}

TEST_CASE("dual Steiner formula") {
    Density hat = hat_density();
    for (int n : {2, 3}) {
        for (const auto& v : {make_vt(n, 0.5), make_half_h_squared(n)}) {
            auto rep = dual_steiner_verify(v, hat, default_r_nodes(n));
            CHECK(rep.polynomiality_ok);
            for (double e : rep.per_coefficient_rel_error) CHECK(e < 1e-6);
        }
    }
}

TEST_CASE("quadratic dual Steiner expansion") {
    // Z*_n(v + 0.5 r h_B^2) = sum_j r^{n-j} Z*_j(v), same zeta in every term
    Density hat = hat_density();
    auto rep = dual_steiner_quadratic_verify(make_half_h_squared(2), hat, default_r_nodes(2));
    CHECK(rep.polynomiality_ok);
    for (double e : rep.per_coefficient_rel_error) CHECK(e < 1e-8);
    // for v = 0.5|y|^2 and zeta = hat the coefficients are pi/3, 2pi/3, pi/3
    CHECK(rep.fitted_coefficients[2] == doctest::Approx(M_PI / 3.0).epsilon(1e-9));
    CHECK(rep.fitted_coefficients[1] == doctest::Approx(2.0 * M_PI / 3.0).epsilon(1e-9));
    CHECK(rep.fitted_coefficients[0] == doctest::Approx(M_PI / 3.0).epsilon(1e-9));

    auto rv = dual_steiner_quadratic_verify(make_vt(2, 0.4), hat, default_r_nodes(2));
    CHECK(rv.polynomiality_ok);
    for (double e : rv.per_coefficient_rel_error) CHECK(e < 1e-7);
}

TEST_CASE("derivative extraction of lower functional volumes") {
    Density hat = hat_density();
    for (int n : {2, 3})
        for (int j = 0; j <= n; ++j)
            for (double t : {0.3, 0.7}) {
                double got = steiner_derivative_extract(make_ut(n, t), j, hat);
                CHECK(got == doctest::Approx(fiv_oracle_ut(t, j, n, hat)).epsilon(1e-7));
            }
    // indicator consistency
    ClassicalBody ball{ClassicalBody::Kind::Ball, 2, 1.0, Vec{}};
    for (int j = 0; j <= 2; ++j)
        CHECK(steiner_derivative_extract(body_indicator(ball), j, hat) ==
              doctest::Approx(fiv_indicator(ball, j, hat)).epsilon(1e-7));
}

TEST_CASE("classical retrieval from functional Steiner coefficients") {
    Density hat = hat_density();
    std::vector<ClassicalBody> bodies = {
        {ClassicalBody::Kind::Ball, 2, 1.0, Vec{}},
        {ClassicalBody::Kind::Ball, 3, 1.0, Vec{}},
        {ClassicalBody::Kind::Box, 2, 0.0, Vec{0.5, 0.5}},
        {ClassicalBody::Kind::Box, 3, 0.0, Vec{0.5, 0.5, 0.5}},
    };
    for (const auto& K : bodies) {
        auto rep = classical_steiner_retrieve(K, hat, default_r_nodes(K.n));
        auto vj = classical_intrinsic_volumes(K);
        REQUIRE(rep.recovered_vj.size() == vj.size());
        for (size_t j = 0; j < vj.size(); ++j)
            CHECK(rep.recovered_vj[j] == doctest::Approx(vj[j]).epsilon(1e-8));
    }
    // retrieval needs zeta(0) != 0
    Density vanish{PiecewiseFn::poly(0.0, 1.0, {0.0, 1.0})};
    CHECK_THROWS_AS(classical_steiner_retrieve(bodies[0], vanish, default_r_nodes(2)), Error);
}

TEST_CASE("general-phi solver: phi(t) = t reduces to alpha/kappa_n") {
    Density hat = hat_density();
    PhiProfile lin{PiecewiseFn::poly(0.0, kInf, {0.0, 1.0})};
    for (int j : {0, 1}) {
        auto sol = general_phi_beta_solve(hat, lin, j, 2);
        CHECK(sol.max_validation_error < 1e-12);
        for (double t : {0.05, 0.3, 0.6, 0.95})
            CHECK(sol.eval(t) == doctest::Approx(hat.eval(t) / M_PI).epsilon(1e-10));
    }
}

TEST_CASE("general-phi solver: strictly increasing phi' solves the equation") {
    Density hat = hat_density();
    PhiProfile tpt2{PiecewiseFn::poly(0.0, kInf, {0.0, 1.0, 1.0})};
    auto sol = general_phi_beta_solve(hat, tpt2, 1, 2);
    CHECK(sol.max_validation_error < 1e-9);
    // independent residual check at fresh points
    auto phi_p = tpt2.phi.derivative();
    auto phi_pp = phi_p.derivative();
    for (double t : {0.07, 0.23, 0.51, 0.88}) {
        double tail = adaptive_integrate(
            [&](double s) { return sol.eval(s) * phi_pp.eval(s); }, t, sol.support_bound, 1e-12,
            {});
        double lhs = M_PI * (sol.eval(t) * phi_p.eval(t) + tail);
        CHECK(lhs == doctest::Approx(hat.eval(t)).epsilon(1e-8));
    }
}

TEST_CASE("general-phi solver: convergent case with phi(t) = t^2/2") {
    // alpha must decay fast enough at 0 for beta = alpha(t)/t - ... to stay bounded
    Density alpha{PiecewiseFn::poly(0.0, 1.0, {0.0, 0.0, 1.0, -1.0})};  // s^2(1-s)
    PhiProfile half_sq{PiecewiseFn::poly(0.0, kInf, {0.0, 0.0, 0.5})};
    auto sol = general_phi_beta_solve(alpha, half_sq, 1, 2);
    CHECK(sol.max_validation_error < 1e-9);
}

TEST_CASE("general-phi solver: divergence is detected") {
    // phi'(0) = 0 with alpha(0) != 0 drives beta to a log blowup near 0
    Density hat = hat_density();
    PhiProfile half_sq{PiecewiseFn::poly(0.0, kInf, {0.0, 0.0, 0.5})};
    CHECK_THROWS_AS(general_phi_beta_solve(hat, half_sq, 1, 2), Error);
    try {
        general_phi_beta_solve(hat, half_sq, 1, 2);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Numeric);
    }
}
