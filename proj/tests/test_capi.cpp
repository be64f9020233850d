#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "fivol.h"

namespace {

const double kPi = 3.14159265358979323846;

struct DensityHandle {
    fivol_density* d = nullptr;
    ~DensityHandle() { fivol_density_free(d); }
};

struct FunctionHandle {
    fivol_function* f = nullptr;
    ~FunctionHandle() { fivol_function_free(f); }
};

}  // namespace

TEST_CASE("version string") {
    std::string v = fivol_version();
    CHECK(v == "fivol 1.0.0");
}

TEST_CASE("parse errors set the status and last_error") {
    fivol_function* f = nullptr;
    CHECK(fivol_function_parse("not json", &f) == FIVOL_ERR_PARSE);
    CHECK(f == nullptr);
    CHECK(std::strlen(fivol_last_error()) > 0);

    CHECK(fivol_function_parse("{\"variant\":\"mystery\"}", &f) == FIVOL_ERR_PARSE);

    fivol_density* d = nullptr;
    CHECK(fivol_density_parse("{\"pieces\":7}", &d) == FIVOL_ERR_PARSE);
}

TEST_CASE("function roundtrip and evaluation") {
    FunctionHandle h;
    REQUIRE(fivol_function_parse("{\"variant\":\"u_t\",\"n\":2,\"t\":0.5}", &h.f) == FIVOL_OK);
    CHECK(fivol_function_dim(h.f) == 2);

    double x[2] = {0.6, 0.0};
    double value = 0.0;
    int finite = 0;
    REQUIRE(fivol_function_eval(h.f, x, 2, &value, &finite) == FIVOL_OK);
    CHECK(finite == 1);
    CHECK(value == doctest::Approx(0.3));
    double far[2] = {2.0, 0.0};
    REQUIRE(fivol_function_eval(h.f, far, 2, &value, &finite) == FIVOL_OK);
    CHECK(finite == 0);

    char* json = nullptr;
    REQUIRE(fivol_function_to_json(h.f, &json) == FIVOL_OK);
    FunctionHandle back;
    REQUIRE(fivol_function_parse(json, &back.f) == FIVOL_OK);
    fivol_string_free(json);
    CHECK(fivol_function_dim(back.f) == 2);

    FunctionHandle conj;
    REQUIRE(fivol_function_conjugate(h.f, &conj.f) == FIVOL_OK);
    double y[2] = {1.5, 0.0};
    REQUIRE(fivol_function_eval(conj.f, y, 2, &value, &finite) == FIVOL_OK);
    CHECK(finite == 1);
    CHECK(value == doctest::Approx(1.0));
}

TEST_CASE("density transforms through the API") {
    DensityHandle hat;
    REQUIRE(fivol_density_hat(&hat.d) == FIVOL_OK);
    CHECK(fivol_density_eval(hat.d, 0.25) == doctest::Approx(0.75));

    DensityHandle r2;
    REQUIRE(fivol_transform_R(hat.d, 2, &r2.d) == FIVOL_OK);
    CHECK(fivol_density_eval(r2.d, 0.5) == doctest::Approx((1.0 - 0.125) / 3.0));

    DensityHandle round;
    REQUIRE(fivol_transform_R_inv(r2.d, 2, &round.d) == FIVOL_OK);
    for (double s : {0.1, 0.5, 0.9})
        CHECK(fivol_density_eval(round.d, s) == doctest::Approx(1.0 - s).epsilon(1e-12));

    DensityHandle z1;
    REQUIRE(fivol_steiner_density(hat.d, 2, 1, &z1.d) == FIVOL_OK);
    CHECK(fivol_density_eval(z1.d, 0.5) == doctest::Approx(-std::log(0.5) / 2.0).epsilon(1e-12));

    int member = 0;
    double lim_s = 0.0, lim_i = 0.0;
    REQUIRE(fivol_class_check(hat.d, 2, 2, &member, &lim_s, &lim_i) == FIVOL_OK);
    CHECK(member == 1);

    char* json = nullptr;
    REQUIRE(fivol_density_to_json(hat.d, &json) == FIVOL_OK);
    DensityHandle back;
    REQUIRE(fivol_density_parse(json, &back.d) == FIVOL_OK);
    fivol_string_free(json);
    CHECK(fivol_density_eval(back.d, 0.3) == doctest::Approx(0.7));
}

TEST_CASE("functional intrinsic volumes through the API") {
    DensityHandle hat;
    REQUIRE(fivol_density_hat(&hat.d) == FIVOL_OK);
    FunctionHandle ut;
    REQUIRE(fivol_function_parse("{\"variant\":\"u_t\",\"n\":2,\"t\":0.5}", &ut.f) == FIVOL_OK);

    double oracle = 0.0;
    REQUIRE(fivol_fiv_oracle_ut(0.5, 1, 2, hat.d, &oracle) == FIVOL_OK);
    CHECK(oracle == doctest::Approx(3.0 * kPi / 4.0).epsilon(1e-12));

    for (int repr : {0, 2, 3, 4, 5}) {
        double z = 0.0;
        REQUIRE(fivol_fiv(ut.f, 0, 1, hat.d, repr, &z) == FIVOL_OK);
        CHECK(z == doctest::Approx(oracle).epsilon(1e-9));
    }

    double dh = 0.0, ma = 0.0, rd = 1.0;
    FunctionHandle vt;
    REQUIRE(fivol_function_parse("{\"variant\":\"v_t\",\"n\":2,\"t\":0.5}", &vt.f) == FIVOL_OK);
    REQUIRE(fivol_cross_representation_check(vt.f, 1, 1, hat.d, &dh, &ma, &rd) == FIVOL_OK);
    CHECK(rd < 1e-8);
    CHECK(dh == doctest::Approx(oracle).epsilon(1e-9));

    double zi = 0.0;
    REQUIRE(fivol_fiv_indicator("{\"kind\":\"ball\",\"n\":2,\"rho\":1.0}", 1, hat.d, &zi) ==
            FIVOL_OK);
    CHECK(zi == doctest::Approx(kPi).epsilon(1e-12));  // kappa_1 R hat(0) V_1 = 2*(1/2)*pi

    double vols[4];
    int n_out = 0;
    REQUIRE(fivol_classical_volumes("{\"kind\":\"box\",\"halfwidths\":[0.5,0.5]}", vols, 4,
                                    &n_out) == FIVOL_OK);
    REQUIRE(n_out == 2);  // dimension; V_0..V_n fill n+1 slots
    CHECK(vols[0] == doctest::Approx(1.0));
    CHECK(vols[1] == doctest::Approx(2.0));
    CHECK(vols[2] == doctest::Approx(1.0));
}

TEST_CASE("class violations map to FIVOL_ERR_CLASS") {
    DensityHandle inv;
    REQUIRE(fivol_density_parse(
                "{\"pieces\":[{\"interval\":[0,1],\"coefficients\":{\"-1\":1}}]}", &inv.d) ==
            FIVOL_OK);
    FunctionHandle ut;
    REQUIRE(fivol_function_parse("{\"variant\":\"u_t\",\"n\":2,\"t\":0.5}", &ut.f) == FIVOL_OK);
    double z = 0.0;
    CHECK(fivol_fiv(ut.f, 0, 2, inv.d, 0, &z) == FIVOL_ERR_CLASS);
    CHECK(std::strlen(fivol_last_error()) > 0);
}

TEST_CASE("measure integrals through the API") {
    DensityHandle hat;
    REQUIRE(fivol_density_hat(&hat.d) == FIVOL_OK);
    FunctionHandle half;
    REQUIRE(fivol_function_parse(
                "{\"variant\":\"quadratic\",\"n\":2,\"Q\":[[1,0],[0,1]],\"b\":[0,0],\"c\":0}",
                &half.f) == FIVOL_OK);
    double out = 0.0;
    REQUIRE(fivol_ma_integral(half.f, hat.d, &out) == FIVOL_OK);
    CHECK(out == doctest::Approx(kPi / 3.0).epsilon(1e-10));

    const fivol_function* pair[2] = {half.f, half.f};
    REQUIRE(fivol_mixed_ma_integral(pair, 2, hat.d, &out) == FIVOL_OK);
    CHECK(out == doctest::Approx(kPi / 3.0).epsilon(1e-10));

    FunctionHandle ut;
    REQUIRE(fivol_function_parse("{\"variant\":\"u_t\",\"n\":2,\"t\":0.5}", &ut.f) == FIVOL_OK);
    REQUIRE(fivol_conj_ma_integral(ut.f, hat.d, &out) == FIVOL_OK);
    CHECK(out == doctest::Approx(kPi * 0.5).epsilon(1e-9));

    FunctionHandle vt;
    REQUIRE(fivol_function_parse("{\"variant\":\"v_t\",\"n\":2,\"t\":0.5}", &vt.f) == FIVOL_OK);
    double a = 0.0, b = 0.0;
    REQUIRE(fivol_theta_j_integral(vt.f, 1, hat.d, &a) == FIVOL_OK);
    REQUIRE(fivol_theta_star_j_integral(ut.f, 1, hat.d, &b) == FIVOL_OK);
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
}

TEST_CASE("Steiner reports through the API") {
    DensityHandle hat;
    REQUIRE(fivol_density_hat(&hat.d) == FIVOL_OK);
    FunctionHandle ut;
    REQUIRE(fivol_function_parse("{\"variant\":\"u_t\",\"n\":2,\"t\":0.5}", &ut.f) == FIVOL_OK);

    double nodes[8];
    int count = 0;
    REQUIRE(fivol_default_r_nodes(2, nodes, 8, &count) == FIVOL_OK);
    REQUIRE(count == 5);

    fivol_report* rep = nullptr;
    REQUIRE(fivol_steiner_verify(ut.f, hat.d, nodes, count, &rep) == FIVOL_OK);
    CHECK(fivol_report_dim(rep) == 2);
    CHECK(fivol_report_num_nodes(rep) == count);
    CHECK(fivol_report_polynomiality_ok(rep) == 1);
    CHECK(fivol_report_fit_residual(rep) < 1e-9);
    double v = 0.0;
    REQUIRE(fivol_report_get(rep, "rel_error", 1, &v) == FIVOL_OK);
    CHECK(v < 1e-8);
    REQUIRE(fivol_report_get(rep, "fitted_coefficient", 2, &v) == FIVOL_OK);
    CHECK(v == doctest::Approx(kPi / 2.0).epsilon(1e-9));  // kappa_2 hat(0.5)
    CHECK(fivol_report_get(rep, "bogus", 0, &v) == FIVOL_ERR_PARSE);
    CHECK(fivol_report_get(rep, "r_node", 99, &v) == FIVOL_ERR_PARSE);
    fivol_report_free(rep);

    fivol_report* ret = nullptr;
    REQUIRE(fivol_retrieve_classical("{\"kind\":\"ball\",\"n\":2,\"rho\":1.0}", hat.d, nodes,
                                     count, &ret) == FIVOL_OK);
    REQUIRE(fivol_report_get(ret, "recovered_vj", 2, &v) == FIVOL_OK);
    CHECK(v == doctest::Approx(kPi).epsilon(1e-8));
    fivol_report_free(ret);

    double extracted = 0.0;
    REQUIRE(fivol_steiner_derivative_extract(ut.f, 1, hat.d, &extracted) == FIVOL_OK);
    CHECK(extracted == doctest::Approx(3.0 * kPi / 4.0).epsilon(1e-7));
}

TEST_CASE("general-phi solve through the API") {
    DensityHandle hat;
    REQUIRE(fivol_density_hat(&hat.d) == FIVOL_OK);
    const char* lin = "[{\"interval\":[0,null],\"coefficients\":{\"1\":1}}]";
    double ts[3] = {0.2, 0.5, 0.8};
    double vals[3];
    double err = 1.0;
    REQUIRE(fivol_phi_beta_solve(hat.d, lin, 1, 2, ts, vals, 3, &err) == FIVOL_OK);
    CHECK(err < 1e-12);
    for (int i = 0; i < 3; ++i)
        CHECK(vals[i] == doctest::Approx((1.0 - ts[i]) / kPi).epsilon(1e-10));

    const char* halfsq = "[{\"interval\":[0,null],\"coefficients\":{\"2\":0.5}}]";
    CHECK(fivol_phi_beta_solve(hat.d, halfsq, 1, 2, ts, vals, 3, &err) == FIVOL_ERR_NUMERIC);
}
