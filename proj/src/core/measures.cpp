#include "measures.hpp"

#include <algorithm>
#include <cmath>

#include "bodies.hpp"
#include "quad.hpp"

namespace fivol {

namespace {

// One argument of a mixed Monge-Ampere integral: radial profile derivative
// plus an optional (non-scalar) quadratic part. Scalar multiples of the
// identity are folded into the profile so that e.g. 0.5|x|^2 keeps the
// all-radial exact path available.
struct EngineArg {
    PiecewiseFn dphi;
    SymMat Q;
    bool has_quad = false;
};

bool is_scalar_identity(const SymMat& Q, double& q) {
    q = Q.at(0, 0);
    for (int i = 0; i < Q.n; ++i)
        for (int j = 0; j < Q.n; ++j) {
            double want = (i == j) ? q : 0.0;
            if (std::fabs(Q.at(i, j) - want) > 1e-14 * (1.0 + std::fabs(q))) return false;
        }
    return true;
}

EngineArg engine_arg(const SpecPtr& v) {
    auto dp = dual_decompose(v);
    if (!dp)
        throw_numeric("measure integral: function has no radial + quadratic decomposition");
    EngineArg a;
    PiecewiseFn phi = dp->phi;
    if (dp->has_quadratic) {
        double q = 0.0;
        if (is_scalar_identity(dp->Q, q)) {
            if (q < 0.0) throw_class("measure integral: non-convex quadratic part");
            phi = add(phi, PiecewiseFn::poly(0.0, kInf, {0.5 * q}, 2));
        } else {
            a.Q = dp->Q;
            a.has_quad = true;
        }
    }
    a.dphi = phi.derivative();
    return a;
}

// drop stray singular terms on the piece at 0 left behind by floating-point
// cancellation; a genuinely divergent term keeps its weight and still throws
void prune_origin_noise(PiecewiseFn& f) {
    for (auto& pc : f.pieces) {
        if (pc.a != 0.0) continue;
        double scale = 0.0;
        for (const auto& t : pc.terms) scale = std::max(scale, std::fabs(t.c));
        std::erase_if(pc.terms, [scale](const Term& t) {
            bool singular = t.e < 0 || (t.e == 0 && t.p > 0);
            return singular && std::fabs(t.c) <= 1e-9 * scale;
        });
    }
    f.normalize();
}

double profile_limit0(const PiecewiseFn& f) {
    if (!f.limit0_finite()) throw_numeric("measure integral: profile derivative diverges at 0");
    return f.eval_limit0();
}

// all-radial mixed integral: kappa_n * int beta d(prod_i phi_i'(r)) as a
// Stieltjes integral (atom at 0, interior jumps, absolutely continuous part)
double stieltjes_mixed(int n, const std::vector<EngineArg>& args, const Density& beta) {
    PiecewiseFn P = PiecewiseFn::poly(0.0, kInf, {1.0});
    for (const auto& a : args) P = multiply(P, a.dphi);

    double acc = 0.0;
    double atom = profile_limit0(P);
    if (atom != 0.0) acc += beta.fn.eval_limit0() * atom;

    for (double r : P.knots()) {
        if (r <= 0.0) continue;
        double jump = P.eval(r) - P.eval_left(r);
        if (std::fabs(jump) > 1e-13 * (1.0 + std::fabs(P.eval(r)))) acc += beta.eval(r) * jump;
    }

    PiecewiseFn prod = multiply(beta.fn, P.derivative());
    prune_origin_noise(prod);
    acc += prod.integrate(0.0, prod.support_end());
    return unit_ball_volume(n) * acc;
}

// mixed integral with genuine quadratic parts: atom at the origin plus an
// absolutely continuous part via radial x spherical quadrature of the
// pointwise mixed discriminant. Profiles must have continuous derivative.
double quadrature_mixed(int n, const std::vector<EngineArg>& args, const Density& beta) {
    std::vector<PiecewiseFn> ddphi(args.size());
    std::vector<double> knots = beta.fn.knots();
    double S = beta.support_bound();
    for (size_t i = 0; i < args.size(); ++i) {
        ddphi[i] = args[i].dphi.derivative();
        for (double r : args[i].dphi.knots()) {
            if (r <= 0.0 || r >= S) continue;
            double jump = args[i].dphi.eval(r) - args[i].dphi.eval_left(r);
            if (std::fabs(jump) > 1e-12 * (1.0 + std::fabs(args[i].dphi.eval(r))))
                throw_numeric("measure integral: gradient jump combined with a quadratic part");
            knots.push_back(r);
        }
    }

    double atom = 1.0;
    for (const auto& a : args) atom *= profile_limit0(a.dphi);
    double acc = (atom != 0.0) ? unit_ball_volume(n) * atom * beta.fn.eval_limit0() : 0.0;

    // H_i(r y) scaled by r: r phi_i'' y y^T + phi_i' (I - y y^T) + r Q_i;
    // the mixed discriminant picks up 1/r^n, against the Jacobian r^{n-1}
    auto integrand = [&](double r) {
        std::vector<double> d1(args.size()), d2(args.size());
        for (size_t i = 0; i < args.size(); ++i) {
            d1[i] = args[i].dphi.eval(r);
            d2[i] = ddphi[i].eval(r);
        }
        double sph = sphere_integral(n, [&](const Vec& y) {
            std::vector<SymMat> H(args.size(), SymMat(n));
            for (size_t i = 0; i < args.size(); ++i) {
                for (int a = 0; a < n; ++a)
                    for (int b = a; b < n; ++b) {
                        double proj = y[a] * y[b];
                        double val = r * d2[i] * proj + d1[i] * ((a == b ? 1.0 : 0.0) - proj);
                        if (args[i].has_quad) val += r * args[i].Q.at(a, b);
                        H[i].set(a, b, val);
                    }
            }
            return mixed_discriminant(H);
        });
        return beta.eval(r) * sph / r;
    };
    acc += adaptive_integrate(integrand, 0.0, S, 1e-11, knots);
    return acc;
}

double mixed_engine(const std::vector<SpecPtr>& vs, const Density& beta) {
    if (vs.empty()) throw_numeric("measure integral: empty argument list");
    int n = vs[0]->n;
    if ((int)vs.size() != n) throw_numeric("measure integral: argument count must equal dimension");
    std::vector<EngineArg> args;
    bool any_quad = false;
    for (const auto& v : vs) {
        if (v->n != n) throw_numeric("measure integral: dimension mismatch");
        args.push_back(engine_arg(v));
        any_quad = any_quad || args.back().has_quad;
    }
    if (beta.is_zero()) return 0.0;
    return any_quad ? quadrature_mixed(n, args, beta) : stieltjes_mixed(n, args, beta);
}

}  // namespace

double ma_integral(const SpecPtr& v, const Density& beta) {
    std::vector<SpecPtr> vs(v->n, v);
    return mixed_engine(vs, beta);
}

double mixed_ma_integral(const std::vector<SpecPtr>& vs, const Density& beta) {
    return mixed_engine(vs, beta);
}

double mixed_ma_multiset_integral(const std::vector<std::pair<SpecPtr, int>>& args,
                                  const Density& beta) {
    std::vector<SpecPtr> vs;
    for (const auto& [v, k] : args)
        for (int i = 0; i < k; ++i) vs.push_back(v);
    return mixed_engine(vs, beta);
}

double conj_ma_integral(const SpecPtr& u, const Density& beta) {
    int n = u->n;
    if (auto body = as_indicator_body(u)) {
        // gradient is 0 on the interior of the body
        double vol;
        if (body->has_box) {
            ClassicalBody K{ClassicalBody::Kind::Box, n, 0.0, body->box_halfwidths};
            vol = mink_volume(K, body->rho);
        } else {
            vol = unit_ball_volume(n) * std::pow(body->rho, n);
        }
        return beta.fn.eval_limit0() * vol;
    }
    if (auto rf = as_radial(u)) {
        PiecewiseFn dphi = rf->phi.derivative();
        double R = rf->R;
        if (R == kInf) {
            // truncate where phi' has left the support of beta
            double S = beta.support_bound();
            double hi = 1.0;
            while (hi < 1e9 && dphi.eval(hi) < S) hi *= 2.0;
            R = hi;
        }
        auto f = [&](double s) { return beta.eval(dphi.eval(s)) * std::pow(s, n - 1); };
        std::vector<double> knots = dphi.knots();
        return n * unit_ball_volume(n) * adaptive_integrate(f, 0.0, R, 1e-12, knots);
    }
    if (u->variant == Variant::Quadratic) {
        double d = det(u->Q);
        if (d <= 0.0) throw_numeric("conjugate measure integral: quadratic part not positive definite");
        auto f = [&](double r) { return beta.eval(r) * std::pow(r, n - 1); };
        return n * unit_ball_volume(n) *
               adaptive_integrate(f, 0.0, beta.support_bound(), 1e-12, beta.fn.knots()) / d;
    }
    return ma_integral(conjugate(u), beta);
}

double theta_j_integral(const SpecPtr& v, int j, const Density& alpha) {
    int n = v->n;
    if (j < 0 || j > n) throw_numeric("theta_j: index out of range");
    std::vector<std::pair<SpecPtr, int>> args;
    if (j > 0) args.emplace_back(v, j);
    if (j < n) args.emplace_back(make_support_ball(n, 1.0), n - j);
    return mixed_ma_multiset_integral(args, alpha);
}

namespace {

// radius of the flat initial segment of a radial profile (the argmin ball)
double flat_radius(const PiecewiseFn& dphi, double R) {
    std::vector<double> ks = dphi.knots();
    // need a finite probe endpoint: past the last knot the profile is a single
    // polynomial, so one extra unit is enough to detect a nonzero tail
    double end = R;
    if (end == kInf) {
        end = 1.0;
        for (double k : ks) end = std::max(end, k + 1.0);
    }
    ks.push_back(end);
    std::sort(ks.begin(), ks.end());
    double r0 = 0.0;
    for (double k : ks) {
        if (k <= r0) continue;
        double mid = 0.5 * (r0 + k);
        if (std::fabs(dphi.eval(mid)) > 1e-13) break;
        r0 = std::min(k, R);
    }
    return r0;
}

bool has_interior_jump(const PiecewiseFn& dphi, double lo, double hi) {
    for (double r : dphi.knots()) {
        if (r <= lo || r >= hi) continue;
        if (std::fabs(dphi.eval(r) - dphi.eval_left(r)) >
            1e-12 * (1.0 + std::fabs(dphi.eval(r))))
            return true;
    }
    return false;
}

}  // namespace

double theta_star_j_integral(const SpecPtr& u, int j, const Density& alpha) {
    int n = u->n;
    if (j < 0 || j > n) throw_numeric("theta_star_j: index out of range");
    double kn = unit_ball_volume(n);
    if (j == 0) return kn * alpha.fn.eval_limit0();  // Theta*_0 is a pure atom
    if (as_indicator_body(u))
        return alpha.fn.eval_limit0() * theta_star_atom(u, j);
    double S = alpha.support_bound();
    if (auto rf = as_radial(u)) {
        PiecewiseFn dphi = rf->phi.derivative();
        double r0 = flat_radius(dphi, rf->R);
        double hi = rf->R;
        if (hi == kInf) {
            hi = std::max(1.0, r0);
            while (hi < 1e9 && dphi.eval(hi) < S) hi *= 2.0;
        }
        if (!has_interior_jump(dphi, r0, hi)) {
            double acc = alpha.fn.eval_limit0() * theta_star_atom(u, j);
            auto f = [&](double s) {
                return alpha.eval(dphi.eval(s)) * std::pow(s, j - 1);
            };
            acc += j * kn * adaptive_integrate(f, r0, hi, 1e-12, dphi.knots());
            return acc;
        }
    } else if (u->variant == Variant::Quadratic && det(u->Q) > 0.0) {
        double d = det(u->Q);
        auto f = [&](double r) {
            double sph = sphere_integral(n, [&](const Vec& y) {
                return tau(y * r, u->Q, n - j);
            });
            return alpha.eval(r) * std::pow(r, n - 1) * sph;
        };
        double ac = adaptive_integrate(f, 0.0, S, 1e-11, alpha.fn.knots());
        return ac / (binomial(n, j) * d);
    }
    return theta_j_integral(conjugate(u), j, alpha);
}

double theta_star_atom(const SpecPtr& u, int j) {
    int n = u->n;
    if (u->variant == Variant::Quadratic && det(u->Q) > 0.0)
        return j == 0 ? unit_ball_volume(n) : 0.0;  // argmin is a point
    if (auto rf = as_radial(u)) {
        // argmin is the ball where the profile stays flat
        double r0 = flat_radius(rf->phi.derivative(), rf->R);
        if (r0 == 0.0) return j == 0 ? unit_ball_volume(n) : 0.0;
        ClassicalBody K{ClassicalBody::Kind::Ball, n, r0, {}};
        double vj = classical_intrinsic_volumes(K)[j];
        return unit_ball_volume(n - j) / binomial(n, j) * vj;
    }
    if (auto body = as_indicator_body(u)) {
        if (!body->has_box || body->rho > 0.0)
            throw_numeric("theta_star_atom: unsupported argmin shape");
        ClassicalBody K{ClassicalBody::Kind::Box, n, 0.0, body->box_halfwidths};
        double vj = classical_intrinsic_volumes(K)[j];
        return unit_ball_volume(n - j) / binomial(n, j) * vj;
    }
    throw_numeric("theta_star_atom: argmin not recognised");
}

std::vector<double> polyfit(const std::vector<double>& xs, const std::vector<double>& ys,
                            int deg, double* residual) {
    int m = (int)xs.size(), k = deg + 1;
    if ((int)ys.size() != m || m < k) throw_numeric("polyfit: not enough nodes");
    // normal equations; the Vandermonde is tiny and well separated
    std::vector<std::vector<double>> A(k, std::vector<double>(k + 1, 0.0));
    for (int i = 0; i < m; ++i) {
        std::vector<double> pw(k);
        pw[0] = 1.0;
        for (int d = 1; d < k; ++d) pw[d] = pw[d - 1] * xs[i];
        for (int r = 0; r < k; ++r) {
            for (int c = 0; c < k; ++c) A[r][c] += pw[r] * pw[c];
            A[r][k] += pw[r] * ys[i];
        }
    }
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int r = col + 1; r < k; ++r)
            if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
        std::swap(A[col], A[piv]);
        if (std::fabs(A[col][col]) < 1e-300) throw_numeric("polyfit: singular system");
        for (int r = 0; r < k; ++r) {
            if (r == col) continue;
            double f = A[r][col] / A[col][col];
            for (int c = col; c <= k; ++c) A[r][c] -= f * A[col][c];
        }
    }
    std::vector<double> coeffs(k);
    for (int r = 0; r < k; ++r) coeffs[r] = A[r][k] / A[r][r];
    if (residual) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) {
            double p = 0.0, pw = 1.0;
            for (int d = 0; d < k; ++d) p += coeffs[d] * pw, pw *= xs[i];
            s += (p - ys[i]) * (p - ys[i]);
        }
        *residual = std::sqrt(s);
    }
    return coeffs;
}

MaSteinerReport ma_steiner_expand(const SpecPtr& v, const Density& beta,
                                  const std::vector<double>& r_nodes) {
    int n = v->n;
    MaSteinerReport rep;
    rep.r_nodes = r_nodes;
    SpecPtr hb = make_support_ball(n, 1.0);
    for (double r : r_nodes)
        rep.values.push_back(ma_integral(make_sum({{1.0, v}, {r, hb}}), beta));
    rep.fitted = polyfit(r_nodes, rep.values, n, &rep.fit_residual);
    for (int k = 0; k <= n; ++k) {
        int j = n - k;
        double ref = binomial(n, j) * theta_j_integral(v, j, beta);
        rep.reference.push_back(ref);
        double denom = std::max(std::fabs(ref), 1e-12);
        rep.rel_error.push_back(std::fabs(rep.fitted[k] - ref) / denom);
    }
    return rep;
}

}  // namespace fivol
