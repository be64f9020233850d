#include "funcspec.hpp"

#include <algorithm>
#include <cmath>

#include "pwfn_json.hpp"

namespace fivol {

namespace {

SpecPtr wrap(FunctionSpec s) { return std::make_shared<FunctionSpec>(std::move(s)); }

// profile value with a right-closed domain endpoint: pieces are [a,b), but the
// function extends continuously to b
double profile_value(const PiecewiseFn& phi, double r) {
    for (const auto& pc : phi.pieces) {
        if (r >= pc.a && r < pc.b) {
            double ls = (r > 0.0) ? std::log(r) : 0.0;
            double acc = 0.0;
            for (const auto& t : pc.terms) {
                double v = t.c * std::pow(r, t.e);
                for (int k = 0; k < t.p; ++k) v *= ls;
                acc += v;
            }
            return acc;
        }
    }
    // exactly at a piece end (e.g. the domain boundary): use the left piece
    for (const auto& pc : phi.pieces) {
        if (r == pc.b && pc.b != kInf) {
            double ls = (r > 0.0) ? std::log(r) : 0.0;
            double acc = 0.0;
            for (const auto& t : pc.terms) {
                double v = t.c * std::pow(r, t.e);
                for (int k = 0; k < t.p; ++k) v *= ls;
                acc += v;
            }
            return acc;
        }
    }
    return 0.0;
}

double box_distance(const Vec& halfwidths, const Vec& x) {
    double s = 0.0;
    for (int i = 0; i < x.n; ++i) {
        double d = std::max(0.0, std::fabs(x[i]) - halfwidths[i]);
        s += d * d;
    }
    return std::sqrt(s);
}

// scalar radial function phi(r) for r in [0, R], +inf outside
struct ScalarFn {
    std::function<double(double)> f;
    double R = kInf;
};

constexpr double kTernaryIters = 200;

double scalar_infconv_eval(const ScalarFn& g1, const ScalarFn& g2, double r) {
    double lo = std::max(0.0, r - g2.R);
    double hi = std::min(r, g1.R);
    if (lo > hi) return kInf;
    auto h = [&](double a) { return g1.f(a) + g2.f(r - a); };
    double a = lo, b = hi;
    for (int i = 0; i < kTernaryIters && (b - a) > 1e-15 * std::max(1.0, hi); ++i) {
        double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
        if (h(m1) <= h(m2))
            b = m2;
        else
            a = m1;
    }
    double best = h(0.5 * (a + b));
    best = std::min(best, std::min(h(lo), h(hi)));
    return best;
}

bool collect_indicator_bodies(const SpecPtr& f, double lambda, double& rho, Vec& halfwidths,
                              bool& has_box) {
    switch (f->variant) {
        case Variant::IndicatorBall:
            rho += lambda * f->rho;
            return true;
        case Variant::UT:
            if (f->t != 0.0) return false;
            rho += lambda;
            return true;
        case Variant::IndicatorBox:
            has_box = true;
            if (halfwidths.n == 0) halfwidths = Vec(f->n);
            for (int i = 0; i < f->n; ++i) halfwidths[i] += lambda * f->halfwidths[i];
            return true;
        case Variant::EpiSum: {
            for (const auto& tm : f->terms)
                if (!collect_indicator_bodies(tm.f, lambda * tm.lambda, rho, halfwidths, has_box))
                    return false;
            return true;
        }
        default:
            return false;
    }
}

std::optional<ScalarFn> scalar_form(const SpecPtr& f);

std::optional<ScalarFn> episum_scalar(const std::vector<SpecTerm>& terms) {
    std::vector<ScalarFn> parts;
    for (const auto& tm : terms) {
        auto s = scalar_form(tm.f);
        if (!s) return std::nullopt;
        double lam = tm.lambda;
        ScalarFn child = *s;
        parts.push_back(ScalarFn{
            [lam, child](double r) { return lam * child.f(r / lam); },
            child.R == kInf ? kInf : lam * child.R});
    }
    if (parts.empty()) return std::nullopt;
    ScalarFn acc = parts[0];
    for (size_t i = 1; i < parts.size(); ++i) {
        ScalarFn g1 = acc, g2 = parts[i];
        acc = ScalarFn{[g1, g2](double r) { return scalar_infconv_eval(g1, g2, r); },
                       (g1.R == kInf || g2.R == kInf) ? kInf : g1.R + g2.R};
    }
    return acc;
}

std::optional<ScalarFn> scalar_form(const SpecPtr& f) {
    if (f->variant == Variant::EpiSum) return episum_scalar(f->terms);
    auto rad = as_radial(f);
    if (!rad) return std::nullopt;
    PiecewiseFn phi = rad->phi;
    double R = rad->R;
    return ScalarFn{[phi](double r) { return profile_value(phi, r); }, R};
}

}  // namespace

// ---------------------------------------------------------------- constructors

SpecPtr make_quadratic(const SymMat& Q, const Vec& b, double c) {
    FunctionSpec s;
    s.variant = Variant::Quadratic;
    s.n = Q.n;
    s.Q = Q;
    s.b = b.n ? b : Vec(Q.n);
    s.c = c;
    return wrap(std::move(s));
}

SpecPtr make_radial(int n, const PiecewiseFn& profile, double dom_radius) {
    FunctionSpec s;
    s.variant = Variant::RadialProfile;
    s.n = n;
    s.profile = profile;
    s.dom_radius = dom_radius;
    return wrap(std::move(s));
}

SpecPtr make_indicator_ball(int n, double rho) {
    FunctionSpec s;
    s.variant = Variant::IndicatorBall;
    s.n = n;
    s.rho = rho;
    return wrap(std::move(s));
}

SpecPtr make_indicator_box(const Vec& halfwidths) {
    FunctionSpec s;
    s.variant = Variant::IndicatorBox;
    s.n = halfwidths.n;
    s.halfwidths = halfwidths;
    return wrap(std::move(s));
}

SpecPtr make_support_ball(int n, double rho) {
    FunctionSpec s;
    s.variant = Variant::SupportBall;
    s.n = n;
    s.rho = rho;
    return wrap(std::move(s));
}

SpecPtr make_support_box(const Vec& halfwidths) {
    FunctionSpec s;
    s.variant = Variant::SupportBox;
    s.n = halfwidths.n;
    s.halfwidths = halfwidths;
    return wrap(std::move(s));
}

SpecPtr make_ut(int n, double t) {
    if (t < 0.0) throw_parse("u_t: t must be >= 0");
    FunctionSpec s;
    s.variant = Variant::UT;
    s.n = n;
    s.t = t;
    return wrap(std::move(s));
}

SpecPtr make_vt(int n, double t) {
    if (t < 0.0) throw_parse("v_t: t must be >= 0");
    FunctionSpec s;
    s.variant = Variant::VT;
    s.n = n;
    s.t = t;
    return wrap(std::move(s));
}

SpecPtr make_sum(std::vector<SpecTerm> terms) {
    if (terms.empty()) throw_parse("sum: needs at least one term");
    std::vector<SpecTerm> flat;
    for (auto& tm : terms) {
        if (tm.lambda <= 0.0) throw_parse("sum: weights must be positive");
        if (tm.f->variant == Variant::Sum) {
            for (const auto& sub : tm.f->terms)
                flat.push_back({tm.lambda * sub.lambda, sub.f});
        } else {
            flat.push_back(tm);
        }
    }
    if (flat.size() == 1 && flat[0].lambda == 1.0) return flat[0].f;
    FunctionSpec s;
    s.variant = Variant::Sum;
    s.n = flat[0].f->n;
    for (const auto& tm : flat)
        if (tm.f->n != s.n) throw_parse("sum: dimension mismatch");
    s.terms = std::move(flat);
    return wrap(std::move(s));
}

SpecPtr make_episum(std::vector<SpecTerm> terms) {
    if (terms.empty()) throw_parse("epi_sum: needs at least one term");
    std::vector<SpecTerm> flat;
    for (auto& tm : terms) {
        if (tm.lambda <= 0.0) throw_parse("epi_sum: weights must be positive");
        if (tm.f->variant == Variant::EpiSum) {
            for (const auto& sub : tm.f->terms)
                flat.push_back({tm.lambda * sub.lambda, sub.f});
        } else {
            flat.push_back(tm);
        }
    }
    if (flat.size() == 1 && flat[0].lambda == 1.0) return flat[0].f;
    FunctionSpec s;
    s.variant = Variant::EpiSum;
    s.n = flat[0].f->n;
    for (const auto& tm : flat)
        if (tm.f->n != s.n) throw_parse("epi_sum: dimension mismatch");
    s.terms = std::move(flat);
    return wrap(std::move(s));
}

SpecPtr make_shift(SpecPtr child, const Vec& tau, double gamma) {
    FunctionSpec s;
    s.variant = Variant::Shift;
    s.n = child->n;
    s.child = std::move(child);
    s.tau = tau.n ? tau : Vec(s.n);
    s.gamma = gamma;
    return wrap(std::move(s));
}

SpecPtr make_half_h_squared(int n) {
    return make_quadratic(SymMat::identity(n), Vec(n), 0.0);
}

// ---------------------------------------------------------------- evaluation

ExtReal evaluate(const SpecPtr& f, const Vec& x) {
    const double r = x.norm();
    switch (f->variant) {
        case Variant::Quadratic: {
            double q = 0.0;
            for (int i = 0; i < f->n; ++i)
                for (int j = 0; j < f->n; ++j) q += x[i] * f->Q.at(i, j) * x[j];
            return ExtReal::of(0.5 * q + f->b.dot(x) + f->c);
        }
        case Variant::RadialProfile:
            if (r > f->dom_radius) return ExtReal::inf();
            return ExtReal::of(profile_value(f->profile, r));
        case Variant::IndicatorBall:
            return r <= f->rho ? ExtReal::of(0.0) : ExtReal::inf();
        case Variant::IndicatorBox: {
            for (int i = 0; i < f->n; ++i)
                if (std::fabs(x[i]) > f->halfwidths[i]) return ExtReal::inf();
            return ExtReal::of(0.0);
        }
        case Variant::SupportBall:
            return ExtReal::of(f->rho * r);
        case Variant::SupportBox: {
            double s = 0.0;
            for (int i = 0; i < f->n; ++i) s += f->halfwidths[i] * std::fabs(x[i]);
            return ExtReal::of(s);
        }
        case Variant::UT:
            return r <= 1.0 ? ExtReal::of(f->t * r) : ExtReal::inf();
        case Variant::VT:
            return ExtReal::of(std::max(0.0, r - f->t));
        case Variant::Sum: {
            double acc = 0.0;
            for (const auto& tm : f->terms) {
                ExtReal v = evaluate(tm.f, x);
                if (!v.finite) return ExtReal::inf();
                acc += tm.lambda * v.v;
            }
            return ExtReal::of(acc);
        }
        case Variant::Shift:
            {
                ExtReal v = evaluate(f->child, x - f->tau);
                if (!v.finite) return v;
                return ExtReal::of(v.v + f->gamma);
            }
        case Variant::EpiSum: {
            // indicator fast path: Minkowski sum of balls and boxes
            double rho = 0.0;
            Vec hw;
            bool has_box = false;
            bool all_ind = true;
            for (const auto& tm : f->terms)
                if (!collect_indicator_bodies(tm.f, tm.lambda, rho, hw, has_box)) {
                    all_ind = false;
                    break;
                }
            if (all_ind) {
                double d = has_box ? box_distance(hw, x) : r;
                return d <= rho + 1e-15 ? ExtReal::of(0.0) : ExtReal::inf();
            }
            auto s = episum_scalar(f->terms);
            if (!s) throw_numeric("epi_sum: evaluation unsupported for this combination");
            if (r > s->R) return ExtReal::inf();
            return ExtReal::of(s->f(r));
        }
    }
    throw_numeric("evaluate: unreachable");
}

Vec gradient(const SpecPtr& f, const Vec& x) {
    const int n = f->n;
    const double r = x.norm();
    switch (f->variant) {
        case Variant::Quadratic: {
            Vec g(n);
            for (int i = 0; i < n; ++i) {
                double s = f->b[i];
                for (int j = 0; j < n; ++j) s += f->Q.at(i, j) * x[j];
                g[i] = s;
            }
            return g;
        }
        case Variant::RadialProfile: {
            if (r > f->dom_radius) throw_numeric("gradient: point outside the domain");
            PiecewiseFn dphi = f->profile.derivative();
            if (r == 0.0) {
                double s0 = dphi.eval(0.0);
                if (std::fabs(s0) > 1e-14) throw_numeric("gradient: kink at the origin");
                return Vec(n);
            }
            double d = profile_value(dphi, r);
            return x * (d / r);
        }
        case Variant::IndicatorBall:
            if (r < f->rho) return Vec(n);
            throw_numeric("gradient: indicator not differentiable on the boundary");
        case Variant::IndicatorBox: {
            for (int i = 0; i < n; ++i)
                if (std::fabs(x[i]) >= f->halfwidths[i])
                    throw_numeric("gradient: indicator not differentiable on the boundary");
            return Vec(n);
        }
        case Variant::SupportBall:
            if (r == 0.0) throw_numeric("gradient: support function kink at the origin");
            return x * (f->rho / r);
        case Variant::SupportBox: {
            Vec g(n);
            for (int i = 0; i < n; ++i) {
                if (x[i] == 0.0 && f->halfwidths[i] != 0.0)
                    throw_numeric("gradient: support function kink on an axis");
                g[i] = f->halfwidths[i] * (x[i] > 0.0 ? 1.0 : -1.0);
            }
            return g;
        }
        case Variant::UT: {
            if (r >= 1.0) throw_numeric("gradient: u_t boundary point");
            if (f->t == 0.0) return Vec(n);
            if (r == 0.0) throw_numeric("gradient: u_t kink at the origin");
            return x * (f->t / r);
        }
        case Variant::VT: {
            if (r == f->t || (r == 0.0 && f->t == 0.0))
                throw_numeric("gradient: v_t kink");
            if (r < f->t) return Vec(n);
            return x * (1.0 / r);
        }
        case Variant::Sum: {
            Vec g(n);
            for (const auto& tm : f->terms) {
                Vec gi = gradient(tm.f, x);
                g = g + gi * tm.lambda;
            }
            return g;
        }
        case Variant::Shift:
            return gradient(f->child, x - f->tau);
        case Variant::EpiSum:
            throw_numeric("gradient: epi_sum has no closed-form gradient");
    }
    throw_numeric("gradient: unreachable");
}

SymMat hessian(const SpecPtr& f, const Vec& x) {
    const int n = f->n;
    const double r = x.norm();
    switch (f->variant) {
        case Variant::Quadratic:
            return f->Q;
        case Variant::RadialProfile: {
            if (r > f->dom_radius) throw_numeric("hessian: point outside the domain");
            PiecewiseFn dphi = f->profile.derivative();
            PiecewiseFn ddphi = dphi.derivative();
            if (r == 0.0) {
                double s0 = dphi.eval(0.0);
                if (std::fabs(s0) > 1e-14) throw_numeric("hessian: kink at the origin");
                return SymMat::identity(n) * ddphi.eval(0.0);
            }
            double d1 = profile_value(dphi, r), d2 = profile_value(ddphi, r);
            SymMat h(n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double xij = x[i] * x[j] / (r * r);
                    double pij = ((i == j) ? 1.0 : 0.0) - xij;
                    h.at(i, j) = d2 * xij + (d1 / r) * pij;
                }
            return h;
        }
        case Variant::IndicatorBall:
            if (r < f->rho) return SymMat(n);
            throw_numeric("hessian: indicator boundary point");
        case Variant::IndicatorBox: {
            for (int i = 0; i < n; ++i)
                if (std::fabs(x[i]) >= f->halfwidths[i])
                    throw_numeric("hessian: indicator boundary point");
            return SymMat(n);
        }
        case Variant::SupportBall:
            return hessian_hB(x) * f->rho;
        case Variant::SupportBox:
            for (int i = 0; i < n; ++i)
                if (x[i] == 0.0 && f->halfwidths[i] != 0.0)
                    throw_numeric("hessian: support function kink on an axis");
            return SymMat(n);
        case Variant::UT:
            if (r >= 1.0 || r == 0.0) throw_numeric("hessian: u_t singular point");
            return hessian_hB(x) * f->t;
        case Variant::VT:
            if (r == f->t) throw_numeric("hessian: v_t kink");
            if (r < f->t) return SymMat(n);
            return hessian_hB(x);
        case Variant::Sum: {
            SymMat h(n);
            for (const auto& tm : f->terms) h = h + hessian(tm.f, x) * tm.lambda;
            return h;
        }
        case Variant::Shift:
            return hessian(f->child, x - f->tau);
        case Variant::EpiSum:
            throw_numeric("hessian: epi_sum has no closed-form hessian");
    }
    throw_numeric("hessian: unreachable");
}

// ---------------------------------------------------------------- radial form

std::optional<RadialForm> as_radial(const SpecPtr& f) {
    switch (f->variant) {
        case Variant::RadialProfile:
            return RadialForm{f->profile, f->dom_radius};
        case Variant::IndicatorBall:
            return RadialForm{PiecewiseFn::zero(), f->rho};
        case Variant::SupportBall:
            return RadialForm{PiecewiseFn::poly(0.0, kInf, {0.0, f->rho}), kInf};
        case Variant::UT:
            return RadialForm{PiecewiseFn::poly(0.0, 1.0, {0.0, f->t}), 1.0};
        case Variant::VT:
            return RadialForm{PiecewiseFn::poly(f->t, kInf, {-f->t, 1.0}), kInf};
        case Variant::Quadratic: {
            double q = f->Q.at(0, 0);
            for (int i = 0; i < f->n; ++i)
                for (int j = 0; j < f->n; ++j) {
                    double want = (i == j) ? q : 0.0;
                    if (f->Q.at(i, j) != want) return std::nullopt;
                }
            for (int i = 0; i < f->n; ++i)
                if (f->b[i] != 0.0) return std::nullopt;
            return RadialForm{PiecewiseFn::poly(0.0, kInf, {f->c, 0.0, 0.5 * q}), kInf};
        }
        case Variant::Sum: {
            PiecewiseFn phi;
            double R = kInf;
            for (const auto& tm : f->terms) {
                auto rad = as_radial(tm.f);
                if (!rad) return std::nullopt;
                phi = add(phi, rad->phi.scaled(tm.lambda));
                R = std::min(R, rad->R);
            }
            return RadialForm{std::move(phi), R};
        }
        case Variant::Shift: {
            for (int i = 0; i < f->n; ++i)
                if (f->tau[i] != 0.0) return std::nullopt;
            auto rad = as_radial(f->child);
            if (!rad) return std::nullopt;
            double end = (rad->R == kInf) ? kInf : rad->R;
            PiecewiseFn cst;
            if (f->gamma != 0.0) {
                Piece pc{0.0, end == kInf ? kInf : end, {{0, 0, f->gamma}}};
                cst.pieces.push_back(pc);
            }
            return RadialForm{add(rad->phi, cst), rad->R};
        }
        default:
            return std::nullopt;
    }
}

// ------------------------------------------------------------ dual decompose

std::optional<DualParts> dual_decompose(const SpecPtr& f) {
    DualParts out;
    out.n = f->n;
    out.Q = SymMat(f->n);
    out.b = Vec(f->n);

    std::function<bool(const SpecPtr&, double)> walk = [&](const SpecPtr& g, double lam) -> bool {
        switch (g->variant) {
            case Variant::Quadratic: {
                out.Q = out.Q + g->Q * lam;
                out.b = out.b + g->b * lam;
                out.c += lam * g->c;
                bool nonzero = false;
                for (int i = 0; i < g->n && !nonzero; ++i)
                    for (int j = 0; j < g->n; ++j)
                        if (g->Q.at(i, j) != 0.0) { nonzero = true; break; }
                out.has_quadratic = out.has_quadratic || nonzero;
                return true;
            }
            case Variant::VT:
            case Variant::SupportBall: {
                auto rad = as_radial(g);
                out.phi = add(out.phi, rad->phi.scaled(lam));
                return true;
            }
            case Variant::RadialProfile: {
                if (g->dom_radius != kInf) return false;
                out.phi = add(out.phi, g->profile.scaled(lam));
                return true;
            }
            case Variant::Sum: {
                for (const auto& tm : g->terms)
                    if (!walk(tm.f, lam * tm.lambda)) return false;
                return true;
            }
            case Variant::Shift: {
                for (int i = 0; i < g->n; ++i)
                    if (g->tau[i] != 0.0) return false;
                out.c += lam * g->gamma;
                return walk(g->child, lam);
            }
            default:
                return false;
        }
    };
    if (!walk(f, 1.0)) return std::nullopt;
    return out;
}

std::optional<IndicatorBody> as_indicator_body(const SpecPtr& f) {
    IndicatorBody body;
    body.n = f->n;
    if (!collect_indicator_bodies(f, 1.0, body.rho, body.box_halfwidths, body.has_box)) {
        // single non-epi-sum indicators are also accepted
        if (f->variant == Variant::IndicatorBall) {
            body.rho = f->rho;
            return body;
        }
        if (f->variant == Variant::IndicatorBox) {
            body.has_box = true;
            body.box_halfwidths = f->halfwidths;
            return body;
        }
        return std::nullopt;
    }
    return body;
}

// ------------------------------------------------------------------ conjugate

namespace {

struct Seg {
    double a, b;       // r-interval
    double c0, c1, c2; // quadratic coefficients
};

// contiguous quadratic segments of a profile on [0, R); throws if a piece is
// not representable as a quadratic
std::vector<Seg> quadratic_segments(const PiecewiseFn& phi, double R) {
    std::vector<Seg> segs;
    double cursor = 0.0;
    for (const auto& pc : phi.pieces) {
        if (pc.a >= R) break;
        if (pc.a > cursor + 1e-14) segs.push_back({cursor, pc.a, 0.0, 0.0, 0.0});
        Seg s{std::max(cursor, pc.a), std::min(R, pc.b), 0.0, 0.0, 0.0};
        for (const auto& t : pc.terms) {
            if (t.p != 0 || t.e < 0 || t.e > 2)
                throw_numeric("profile_conjugate: piece is not quadratic");
            if (t.e == 0) s.c0 = t.c;
            if (t.e == 1) s.c1 = t.c;
            if (t.e == 2) s.c2 = t.c;
        }
        if (s.c2 < -1e-14) throw_class("profile_conjugate: concave piece");
        segs.push_back(s);
        cursor = s.b;
        if (cursor >= R) break;
    }
    if (cursor < R) segs.push_back({cursor, R, 0.0, 0.0, 0.0});
    return segs;
}

double seg_value(const Seg& s, double r) { return s.c0 + s.c1 * r + s.c2 * r * r; }
double seg_slope(const Seg& s, double r) { return s.c1 + 2.0 * s.c2 * r; }

bool piecewise_quadratic(const PiecewiseFn& phi) {
    for (const auto& pc : phi.pieces)
        for (const auto& t : pc.terms)
            if (t.p != 0 || t.e < 0 || t.e > 2) return false;
    return true;
}

PiecewiseFn sample_to_pwl(const PiecewiseFn& phi, double R, double& Rout) {
    // piecewise-linear fallback for non-quadratic profiles
    double cap = R;
    if (cap == kInf) {
        PiecewiseFn dphi = phi.derivative();
        cap = 1.0;
        while (cap < 4096.0 && profile_value(dphi, cap) < 128.0) cap *= 2.0;
    }
    const int N = 8192;
    PiecewiseFn out;
    double prev_r = 0.0, prev_v = profile_value(phi, 0.0);
    for (int i = 1; i <= N; ++i) {
        double r = cap * i / N;
        double v = profile_value(phi, r);
        double slope = (v - prev_v) / (r - prev_r);
        Piece pc{prev_r, r, {{0, 0, prev_v - slope * prev_r}, {1, 0, slope}}};
        out.pieces.push_back(pc);
        prev_r = r;
        prev_v = v;
    }
    Rout = cap;
    return out;
}

}  // namespace

ScalarConjugate profile_conjugate(const PiecewiseFn& phi_in, double R_in) {
    PiecewiseFn phi = phi_in;
    double R = R_in;
    if (!piecewise_quadratic(phi)) {
        double cap = 0.0;
        phi = sample_to_pwl(phi, R, cap);
        R = cap;
        // note: if the original domain was unbounded this truncates it; the
        // conjugate is then exact only up to slope phi'(cap)
    }
    auto segs = quadratic_segments(phi, R);
    PiecewiseFn out;
    double s_cursor = 0.0;
    double phi0 = seg_value(segs.front(), 0.0);
    auto push_linear = [&](double s_from, double s_to, double r, double val) {
        // phi*(s) = r s - val on [s_from, s_to)
        if (s_to <= s_from + 1e-15) return;
        Piece pc{s_from, s_to, {}};
        if (r != 0.0) pc.terms.push_back({1, 0, r});
        pc.terms.push_back({0, 0, -val});
        out.pieces.push_back(std::move(pc));
    };
    // flat start: slopes below phi'(0+) all pick r = 0
    double s0 = seg_slope(segs.front(), segs.front().a);
    if (s0 < 0.0) throw_class("profile_conjugate: decreasing profile");
    push_linear(0.0, s0, 0.0, phi0);
    s_cursor = std::max(0.0, s0);
    for (size_t i = 0; i < segs.size(); ++i) {
        const Seg& sg = segs[i];
        double sa = seg_slope(sg, sg.a);
        // kink between segments: conjugate is linear with r = sg.a
        if (sa > s_cursor + 1e-15)
            push_linear(s_cursor, sa, sg.a, seg_value(sg, sg.a));
        s_cursor = std::max(s_cursor, sa);
        if (sg.c2 > 1e-14 && sg.b > sg.a) {
            double sb = (sg.b == kInf) ? kInf : seg_slope(sg, sg.b);
            if (sb > s_cursor + 1e-15 || sb == kInf) {
                // phi*(s) = (s - c1)^2 / (4 c2) - c0
                Piece pc{s_cursor, sb, {}};
                double inv = 1.0 / (4.0 * sg.c2);
                pc.terms.push_back({2, 0, inv});
                pc.terms.push_back({1, 0, -2.0 * sg.c1 * inv});
                pc.terms.push_back({0, 0, sg.c1 * sg.c1 * inv - sg.c0});
                out.pieces.push_back(std::move(pc));
                s_cursor = sb;
            }
        }
        if (s_cursor == kInf) break;
    }
    double Rstar;
    if (R != kInf) {
        // domain boundary: conjugate continues linearly with slope R
        const Seg& last = segs.back();
        push_linear(s_cursor, kInf, R, seg_value(last, R));
        Rstar = kInf;
    } else {
        Rstar = (s_cursor == kInf) ? kInf : s_cursor;
    }
    out.normalize();
    return ScalarConjugate{std::move(out), Rstar};
}

SpecPtr conjugate(const SpecPtr& f) {
    const int n = f->n;
    switch (f->variant) {
        case Variant::Quadratic: {
            bool zero = true;
            for (int i = 0; i < n && zero; ++i)
                for (int j = 0; j < n; ++j)
                    if (f->Q.at(i, j) != 0.0) { zero = false; break; }
            if (zero)
                throw_class("conjugate: affine function conjugates to a point indicator, "
                            "which is outside the catalog");
            SymMat Qi = inverse(f->Q);
            Vec bi(n);
            for (int i = 0; i < n; ++i) {
                double s = 0.0;
                for (int j = 0; j < n; ++j) s += Qi.at(i, j) * f->b[j];
                bi[i] = -s;
            }
            double ci = -0.5 * bi.dot(f->b) - f->c;
            return make_quadratic(Qi, bi, ci);
        }
        case Variant::RadialProfile: {
            auto sc = profile_conjugate(f->profile, f->dom_radius);
            return make_radial(n, sc.phi, sc.R);
        }
        case Variant::IndicatorBall:
            return make_support_ball(n, f->rho);
        case Variant::SupportBall:
            return make_indicator_ball(n, f->rho);
        case Variant::IndicatorBox:
            return make_support_box(f->halfwidths);
        case Variant::SupportBox:
            return make_indicator_box(f->halfwidths);
        case Variant::UT:
            return make_vt(n, f->t);
        case Variant::VT:
            return make_ut(n, f->t);
        case Variant::EpiSum: {
            std::vector<SpecTerm> out;
            for (const auto& tm : f->terms) out.push_back({tm.lambda, conjugate(tm.f)});
            return make_sum(std::move(out));
        }
        case Variant::Sum: {
            // split off affine children: (g + <B,x> + C)* = g*(y - B) - C
            std::vector<SpecTerm> rest;
            Vec B(n);
            double C = 0.0;
            bool has_affine = false;
            for (const auto& tm : f->terms) {
                if (tm.f->variant == Variant::Quadratic) {
                    bool zero = true;
                    for (int i = 0; i < n && zero; ++i)
                        for (int j = 0; j < n; ++j)
                            if (tm.f->Q.at(i, j) != 0.0) { zero = false; break; }
                    if (zero) {
                        B = B + tm.f->b * tm.lambda;
                        C += tm.lambda * tm.f->c;
                        has_affine = true;
                        continue;
                    }
                }
                rest.push_back(tm);
            }
            if (rest.empty())
                throw_class("conjugate: purely affine sum is outside the catalog");
            std::vector<SpecTerm> out;
            for (const auto& tm : rest) out.push_back({tm.lambda, conjugate(tm.f)});
            SpecPtr core = make_episum(std::move(out));
            if (!has_affine) return core;
            return make_shift(core, B, -C);
        }
        case Variant::Shift: {
            // (f(. - tau) + gamma)* = f* + <tau, .> - gamma
            SpecPtr inner = conjugate(f->child);
            std::vector<SpecTerm> terms;
            terms.push_back({1.0, inner});
            terms.push_back({1.0, make_quadratic(SymMat(n), f->tau, -f->gamma)});
            return make_sum(std::move(terms));
        }
    }
    throw_numeric("conjugate: unreachable");
}

SpecPtr inf_convolve(const SpecPtr& f, const SpecPtr& g) {
    return make_episum({{1.0, f}, {1.0, g}});
}

SpecPtr epi_scale(double lambda, const SpecPtr& f) {
    if (lambda <= 0.0) throw_parse("epi_scale: lambda must be positive");
    return make_episum({{lambda, f}});
}

// --------------------------------------------------------------- max and min

std::optional<std::pair<SpecPtr, SpecPtr>> pointwise_min_max(const SpecPtr& f, const SpecPtr& g) {
    if (spec_to_json(f) == spec_to_json(g)) return std::make_pair(f, g);
    // dominance check: if f <= g everywhere then min = f, max = g (the only
    // certified-convex case; crossing pairs are rejected)
    auto leq = [](const ExtReal& a, const ExtReal& b) {
        if (!b.finite) return true;
        if (!a.finite) return false;
        return a.v <= b.v + 1e-12 * std::max({1.0, std::fabs(a.v), std::fabs(b.v)});
    };
    bool f_le_g = true, g_le_f = true;
    auto probe = [&](const Vec& x) {
        ExtReal a = evaluate(f, x), b = evaluate(g, x);
        if (!leq(a, b)) f_le_g = false;
        if (!leq(b, a)) g_le_f = false;
    };
    bool radial_pair = as_radial(f).has_value() && as_radial(g).has_value();
    if (radial_pair) {
        Vec x(f->n);
        for (int i = 0; i <= 800; ++i) {
            x[0] = 4.0 * i / 800.0;
            probe(x);
            if (!f_le_g && !g_le_f) break;
        }
    } else {
        unsigned state = 12345u;
        auto rnd = [&]() {
            state = state * 1664525u + 1013904223u;
            return (state >> 8) * (1.0 / 16777216.0) * 6.0 - 3.0;
        };
        for (int i = 0; i < 500; ++i) {
            Vec x(f->n);
            for (int d = 0; d < f->n; ++d) x[d] = rnd();
            probe(x);
            if (!f_le_g && !g_le_f) break;
        }
    }
    if (f_le_g) return std::make_pair(f, g);
    if (g_le_f) return std::make_pair(g, f);
    return std::nullopt;
}

// --------------------------------------------------------------------- flags

bool is_supercoercive(const SpecPtr& f) {
    switch (f->variant) {
        case Variant::Quadratic:
            return det(f->Q) > 0.0;
        case Variant::RadialProfile: {
            if (f->dom_radius != kInf) return true;
            // superlinear growth at infinity
            if (f->profile.pieces.empty()) return false;
            const auto& last = f->profile.pieces.back();
            if (last.b != kInf) return true;  // zero beyond -> bounded, not coercive; but
                                              // a profile vanishing at infinity is not convex
                                              // unless identically 0 -- treat as not sc
            for (const auto& t : last.terms)
                if ((t.e >= 2 || (t.e > 1 && t.p > 0)) && t.c > 0.0) return true;
            return false;
        }
        case Variant::IndicatorBall:
        case Variant::IndicatorBox:
        case Variant::UT:
            return true;
        case Variant::SupportBall:
        case Variant::SupportBox:
        case Variant::VT:
            return false;
        case Variant::EpiSum: {
            for (const auto& tm : f->terms)
                if (!is_supercoercive(tm.f)) return false;
            return true;
        }
        case Variant::Sum: {
            for (const auto& tm : f->terms)
                if (is_supercoercive(tm.f)) return true;
            return false;
        }
        case Variant::Shift:
            return is_supercoercive(f->child);
    }
    return false;
}

bool is_finite_valued(const SpecPtr& f) {
    switch (f->variant) {
        case Variant::Quadratic:
        case Variant::SupportBall:
        case Variant::SupportBox:
        case Variant::VT:
            return true;
        case Variant::RadialProfile:
            return f->dom_radius == kInf;
        case Variant::IndicatorBall:
        case Variant::IndicatorBox:
        case Variant::UT:
            return false;
        case Variant::EpiSum: {
            for (const auto& tm : f->terms)
                if (is_finite_valued(tm.f)) return true;
            return false;
        }
        case Variant::Sum: {
            for (const auto& tm : f->terms)
                if (!is_finite_valued(tm.f)) return false;
            return true;
        }
        case Variant::Shift:
            return is_finite_valued(f->child);
    }
    return false;
}

// ---------------------------------------------------------------------- JSON

namespace {

nlohmann::json spec_to_json_obj(const SpecPtr& f) {
    nlohmann::json j;
    switch (f->variant) {
        case Variant::Quadratic: {
            j["variant"] = "quadratic";
            j["n"] = f->n;
            nlohmann::json Q = nlohmann::json::array();
            for (int i = 0; i < f->n; ++i) {
                nlohmann::json row = nlohmann::json::array();
                for (int k = 0; k < f->n; ++k) row.push_back(f->Q.at(i, k));
                Q.push_back(std::move(row));
            }
            j["Q"] = std::move(Q);
            nlohmann::json b = nlohmann::json::array();
            for (int i = 0; i < f->n; ++i) b.push_back(f->b[i]);
            j["b"] = std::move(b);
            j["c"] = f->c;
            break;
        }
        case Variant::RadialProfile:
            j["variant"] = "radial_profile";
            j["n"] = f->n;
            j["profile"] = pwfn_to_json(f->profile);
            j["dom_radius"] = f->dom_radius == kInf ? nlohmann::json(nullptr)
                                                    : nlohmann::json(f->dom_radius);
            break;
        case Variant::IndicatorBall:
            j["variant"] = "indicator_ball";
            j["n"] = f->n;
            j["rho"] = f->rho;
            break;
        case Variant::IndicatorBox:
        case Variant::SupportBox: {
            j["variant"] = f->variant == Variant::IndicatorBox ? "indicator_box" : "support_box";
            nlohmann::json h = nlohmann::json::array();
            for (int i = 0; i < f->n; ++i) h.push_back(f->halfwidths[i]);
            j["halfwidths"] = std::move(h);
            break;
        }
        case Variant::SupportBall:
            j["variant"] = "support_ball";
            j["n"] = f->n;
            j["rho"] = f->rho;
            break;
        case Variant::UT:
            j["variant"] = "u_t";
            j["n"] = f->n;
            j["t"] = f->t;
            break;
        case Variant::VT:
            j["variant"] = "v_t";
            j["n"] = f->n;
            j["t"] = f->t;
            break;
        case Variant::EpiSum:
        case Variant::Sum: {
            j["variant"] = f->variant == Variant::EpiSum ? "epi_sum" : "sum";
            nlohmann::json terms = nlohmann::json::array();
            for (const auto& tm : f->terms) {
                nlohmann::json t;
                t["lambda"] = tm.lambda;
                t["f"] = spec_to_json_obj(tm.f);
                terms.push_back(std::move(t));
            }
            j["terms"] = std::move(terms);
            break;
        }
        case Variant::Shift: {
            j["variant"] = "shift";
            j["f"] = spec_to_json_obj(f->child);
            nlohmann::json tau = nlohmann::json::array();
            for (int i = 0; i < f->n; ++i) tau.push_back(f->tau[i]);
            j["tau"] = std::move(tau);
            j["gamma"] = f->gamma;
            break;
        }
    }
    return j;
}

Vec vec_from_json(const nlohmann::json& arr) {
    if (!arr.is_array() || arr.size() > static_cast<size_t>(kMaxDim))
        throw_parse("function JSON: bad vector");
    Vec v(static_cast<int>(arr.size()));
    for (size_t i = 0; i < arr.size(); ++i) v[static_cast<int>(i)] = arr[i].get<double>();
    return v;
}

SpecPtr spec_from_json_obj(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("variant"))
        throw_parse("function JSON: missing 'variant'");
    std::string v = j["variant"].get<std::string>();
    auto need = [&](const char* k) -> const nlohmann::json& {
        if (!j.contains(k)) throw_parse(std::string("function JSON: missing '") + k + "'");
        return j[k];
    };
    if (v == "quadratic") {
        int n = need("n").get<int>();
        if (n < 1 || n > kMaxDim) throw_parse("function JSON: n out of range");
        SymMat Q(n);
        const auto& jq = need("Q");
        if (!jq.is_array() || static_cast<int>(jq.size()) != n)
            throw_parse("function JSON: Q must be n x n");
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) Q.at(i, k) = jq[i][k].get<double>();
        for (int i = 0; i < n; ++i)
            for (int k = i + 1; k < n; ++k)
                if (std::fabs(Q.at(i, k) - Q.at(k, i)) > 1e-12)
                    throw_parse("function JSON: Q must be symmetric");
        Vec b(n);
        if (j.contains("b")) b = vec_from_json(j["b"]);
        double c = j.value("c", 0.0);
        return make_quadratic(Q, b, c);
    }
    if (v == "radial_profile") {
        int n = need("n").get<int>();
        PiecewiseFn phi = pwfn_from_json(need("profile"), /*allow_unbounded=*/true);
        double R = kInf;
        if (j.contains("dom_radius") && !j["dom_radius"].is_null())
            R = j["dom_radius"].get<double>();
        return make_radial(n, phi, R);
    }
    if (v == "indicator_ball") return make_indicator_ball(need("n").get<int>(), need("rho").get<double>());
    if (v == "support_ball") return make_support_ball(need("n").get<int>(), need("rho").get<double>());
    if (v == "indicator_box") return make_indicator_box(vec_from_json(need("halfwidths")));
    if (v == "support_box") return make_support_box(vec_from_json(need("halfwidths")));
    if (v == "u_t") return make_ut(need("n").get<int>(), need("t").get<double>());
    if (v == "v_t") return make_vt(need("n").get<int>(), need("t").get<double>());
    if (v == "epi_sum" || v == "sum") {
        std::vector<SpecTerm> terms;
        for (const auto& tj : need("terms"))
            terms.push_back({tj.value("lambda", 1.0), spec_from_json_obj(tj.at("f"))});
        return v == "epi_sum" ? make_episum(std::move(terms)) : make_sum(std::move(terms));
    }
    if (v == "shift") {
        SpecPtr child = spec_from_json_obj(need("f"));
        return make_shift(child, vec_from_json(need("tau")), j.value("gamma", 0.0));
    }
    throw_parse("function JSON: unknown variant '" + v + "'");
}

}  // namespace

std::string spec_to_json(const SpecPtr& f) { return spec_to_json_obj(f).dump(2); }

SpecPtr spec_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw_parse(std::string("function JSON: ") + e.what());
    }
    return spec_from_json_obj(j);
}

}  // namespace fivol
