#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "density.hpp"
#include "mat.hpp"

using namespace fivol;

namespace {

Density random_density(std::mt19937& rng) {
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    std::uniform_real_distribution<double> len(0.2, 1.0);
    double a = len(rng), b = a + len(rng);
    PiecewiseFn f = PiecewiseFn::poly(0.0, a, {c(rng), c(rng), c(rng), c(rng)});
    f = add(f, PiecewiseFn::poly(a, b, {c(rng), c(rng)}));
    return Density{f};
}

}  // namespace

TEST_CASE("hat density basics") {
    Density hat = hat_density();
    CHECK(hat.eval(0.25) == doctest::Approx(0.75));
    CHECK(hat.eval(1.5) == 0.0);
    CHECK(hat.support_bound() == doctest::Approx(1.0));
}

TEST_CASE("R transform of hat: closed forms") {
    Density hat = hat_density();
    // R^l hat(t) = (1 - t^{l+1})/(l+1) on [0,1]
    for (int l = 0; l <= 3; ++l) {
        Density r = transform_R(hat, l);
        for (double t : {0.0, 0.1, 0.4, 0.77, 0.999}) {
            double expect = (1.0 - std::pow(t, l + 1)) / (l + 1);
            double got = t > 0 ? r.eval(t) : r.fn.eval_limit0();
            CHECK(got == doctest::Approx(expect).epsilon(1e-13));
        }
        CHECK(r.eval(1.2) == 0.0);
    }
}

TEST_CASE("inverse transform of hat produces the log family") {
    Density hat = hat_density();
    Density r1 = transform_R_inv(hat, 1);
    for (double s : {0.1, 0.3, 0.9}) CHECK(r1.eval(s) == doctest::Approx(-std::log(s)).epsilon(1e-12));
    Density r2 = transform_R_inv(hat, 2);
    for (double s : {0.1, 0.3, 0.9}) CHECK(r2.eval(s) == doctest::Approx(1.0 / s - 1.0).epsilon(1e-12));
}

TEST_CASE("transform bijection: R^{-l} after R^l is the identity") {
    std::mt19937 rng(5);
    for (int l = 0; l <= 3; ++l)
        for (int trial = 0; trial < 20; ++trial) {
            Density z = random_density(rng);
            Density round = transform_R_inv(transform_R(z, l), l);
            CHECK(density_equal(z, round, 1e-10));
        }
}

TEST_CASE("bijection in the other order on transform images") {
    std::mt19937 rng(6);
    for (int l = 0; l <= 3; ++l)
        for (int trial = 0; trial < 20; ++trial) {
            Density z = random_density(rng);
            Density rho = transform_R(z, l);
            CHECK(density_equal(rho, transform_R(transform_R_inv(rho, l), l), 1e-10));
        }
}

TEST_CASE("class membership") {
    Density hat = hat_density();
    for (int n = 1; n <= 3; ++n)
        for (int j = 0; j <= n; ++j) CHECK(class_check(hat, j, n).member);

    // zeta = 1/s is rejected for j = 2 (no finite limit at 0) and for j = 1
    // (s^{n-j} zeta -> 1, not 0), but admissible for j = 0
    Density inv{PiecewiseFn::poly(0.0, 1.0, {1.0}, -1)};
    CHECK_FALSE(class_check(inv, 2, 2).member);
    CHECK_FALSE(class_check(inv, 1, 2).member);
    CHECK(class_check(inv, 0, 2).member);
}

TEST_CASE("class membership limits") {
    // zeta = 1/s: s^{n-j} zeta = s^{n-j-1}; for n=2, j=1 the limit is 1 != 0
    Density inv{PiecewiseFn::poly(0.0, 1.0, {1.0}, -1)};
    auto c = class_check(inv, 1, 2);
    CHECK_FALSE(c.member);
    CHECK(c.s_pow_finite);
    CHECK(c.limit_s_pow == doctest::Approx(1.0));
    auto c0 = class_check(inv, 0, 2);
    CHECK(c0.member);
}

TEST_CASE("steiner densities of hat") {
    Density hat = hat_density();
    // n = 2: zeta_2 = hat, zeta_1 = -ln s / kappa_1, zeta_0 = (1/s - 1)/kappa_2
    auto zs = steiner_densities(hat, 2);
    REQUIRE(zs.size() == 3);
    CHECK(density_equal(zs[2], hat));
    for (double s : {0.1, 0.5, 0.9}) {
        CHECK(zs[1].eval(s) == doctest::Approx(-std::log(s) / 2.0).epsilon(1e-12));
        CHECK(zs[0].eval(s) == doctest::Approx((1.0 / s - 1.0) / M_PI).epsilon(1e-12));
    }
    // each zeta_j lands in Had^n_j
    for (int j = 0; j <= 2; ++j) CHECK(class_check(zs[j], j, 2).member);
    // bijection: kappa_{n-j} R^{n-j} zeta_j recovers hat
    for (int j = 0; j <= 2; ++j) {
        Density back = transform_R(zs[j], 2 - j);
        back.fn = back.fn.scaled(unit_ball_volume(2 - j));
        CHECK(density_equal(back, hat, 1e-10));
    }
}

TEST_CASE("alpha_of_zeta scaling") {
    Density hat = hat_density();
    // alpha = C(n,j) R^{n-j} hat; n=2, j=1: alpha(t) = 2 (1-t^2)/2 = 1-t^2
    Density a = alpha_of_zeta(hat, 1, 2);
    for (double t : {0.0, 0.3, 0.8})
        CHECK((t > 0 ? a.eval(t) : a.fn.eval_limit0()) ==
              doctest::Approx(1.0 - t * t).epsilon(1e-13));
}

TEST_CASE("alpha_of_zeta rejects class violations") {
    Density inv{PiecewiseFn::poly(0.0, 1.0, {1.0}, -1)};
    CHECK_THROWS_AS(alpha_of_zeta(inv, 2, 2), Error);
}

TEST_CASE("density JSON roundtrip") {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        // the parser insists on continuity across knots, so patch the second
        // piece's constant term to match the first at the shared knot
        Density z = random_density(rng);
        double knot = z.fn.pieces[0].b;
        double gap = z.fn.eval_left(knot) - z.fn.eval(knot);
        z.fn.pieces[1].terms.push_back({0, 0, gap});
        z.fn.normalize();
        Density back = density_from_json(density_to_json(z));
        CHECK(density_equal(z, back, 1e-13));
    }
    Density withlog = transform_R_inv(hat_density(), 1);
    CHECK(density_equal(withlog, density_from_json(density_to_json(withlog)), 1e-13));
}

TEST_CASE("density JSON validation") {
    CHECK_THROWS_AS(density_from_json("not json"), Error);
    CHECK_THROWS_AS(density_from_json("{\"pieces\": 3}"), Error);
    // unbounded support rejected
    CHECK_THROWS_AS(
        density_from_json("{\"pieces\":[{\"interval\":[0,null],\"coefficients\":{\"0\":1}}]}"),
        Error);
    // discontinuity at an interior knot rejected
    CHECK_THROWS_AS(
        density_from_json("{\"pieces\":[{\"interval\":[0,1],\"coefficients\":{\"0\":1}},"
                          "{\"interval\":[1,2],\"coefficients\":{\"0\":5}}]}"),
        Error);
    try {
        density_from_json("[]");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Parse);
    }
}
