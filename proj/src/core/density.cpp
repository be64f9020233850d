#include "density.hpp"

#include <cmath>

#include "mat.hpp"
#include "pwfn_json.hpp"

namespace fivol {

HadClassCheck class_check(const Density& zeta, int j, int n) {
    if (j < 0 || j > n) throw_parse("class_check: j out of range");
    HadClassCheck r;
    r.j = j;
    PiecewiseFn pw = zeta.fn.mul_monomial(n - j, 0);
    r.s_pow_finite = pw.limit0_finite();
    if (r.s_pow_finite) r.limit_s_pow = pw.eval_limit0();
    if (j == n) {
        r.member = r.s_pow_finite;
        r.integral_finite = true;
        r.limit_integral = 0.0;
        return r;
    }
    bool tail_ok = true;
    double tail_lim = 0.0;
    try {
        PiecewiseFn t = zeta.fn.mul_monomial(n - j - 1, 0).tail_integral();
        tail_ok = t.limit0_finite();
        if (tail_ok) tail_lim = t.eval_limit0();
    } catch (const Error&) {
        tail_ok = false;
    }
    r.integral_finite = tail_ok;
    r.limit_integral = tail_lim;
    r.member = r.s_pow_finite && std::fabs(r.limit_s_pow) < 1e-12 && r.integral_finite;
    return r;
}

Density transform_R(const Density& zeta, int l) {
    if (l < 0) throw_parse("transform_R: l must be >= 0");
    if (l == 0) return zeta;
    if (!zeta.fn.bounded_support()) throw_class("transform_R: unbounded support");
    PiecewiseFn head = zeta.fn.mul_monomial(l, 0);
    PiecewiseFn tail = zeta.fn.mul_monomial(l - 1, 0).tail_integral().scaled(static_cast<double>(l));
    Density r{add(head, tail)};
    return r;
}

Density transform_R_inv(const Density& rho, int l) {
    if (l < 0) throw_parse("transform_R_inv: l must be >= 0");
    if (l == 0) return rho;
    if (!rho.fn.bounded_support()) throw_class("transform_R_inv: unbounded support");
    PiecewiseFn head = rho.fn.mul_monomial(-l, 0);
    PiecewiseFn tail = rho.fn.mul_monomial(-l - 1, 0).tail_integral().scaled(-static_cast<double>(l));
    Density r{add(head, tail)};
    return r;
}

std::vector<Density> steiner_densities(const Density& zeta, int n) {
    auto chk = class_check(zeta, n, n);
    if (!chk.member) throw_class("steiner_densities: zeta is not in Had^n_n");
    std::vector<Density> out(n + 1);
    for (int j = 0; j <= n; ++j) {
        Density d = transform_R_inv(zeta, n - j);
        out[j] = Density{d.fn.scaled(1.0 / unit_ball_volume(n - j))};
    }
    return out;
}

Density alpha_of_zeta(const Density& zeta, int j, int n) {
    auto chk = class_check(zeta, j, n);
    if (!chk.member) throw_class("alpha_of_zeta: zeta is not in Had^n_j");
    Density d = transform_R(zeta, n - j);
    return Density{d.fn.scaled(binomial(n, j))};
}

Density hat_density() {
    return Density{PiecewiseFn::poly(0.0, 1.0, {1.0, -1.0})};
}

bool density_equal(const Density& a, const Density& b, double tol) {
    return coeff_distance(a.fn, b.fn) <= tol;
}

std::string density_to_json(const Density& d) {
    nlohmann::json out;
    out["pieces"] = pwfn_to_json(d.fn);
    return out.dump(2);
}

Density density_from_json(const std::string& text) {
    nlohmann::json in;
    try {
        in = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw_parse(std::string("density JSON: ") + e.what());
    }
    if (!in.contains("pieces") || !in["pieces"].is_array())
        throw_parse("density JSON: missing 'pieces' array");
    PiecewiseFn fn = pwfn_from_json(in["pieces"], /*allow_unbounded=*/false);
    // continuity across interior knots (checked numerically on the shared knot)
    for (size_t i = 0; i + 1 < fn.pieces.size(); ++i) {
        if (fn.pieces[i].b != fn.pieces[i + 1].a) continue;
        double k = fn.pieces[i].b;
        double left = 0.0, right = 0.0;
        {
            double ls = std::log(k);
            for (const auto& t : fn.pieces[i].terms) {
                double v = t.c * std::pow(k, t.e);
                for (int q = 0; q < t.p; ++q) v *= ls;
                left += v;
            }
            for (const auto& t : fn.pieces[i + 1].terms) {
                double v = t.c * std::pow(k, t.e);
                for (int q = 0; q < t.p; ++q) v *= ls;
                right += v;
            }
        }
        double scale = std::max({1.0, std::fabs(left), std::fabs(right)});
        if (std::fabs(left - right) > 1e-9 * scale)
            throw_parse("density JSON: discontinuous across knot");
    }
    return Density{std::move(fn)};
}

}  // namespace fivol
