#include "pwfn.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace fivol {

namespace {

double eval_terms(const std::vector<Term>& terms, double s) {
    double ls = (s > 0.0) ? std::log(s) : 0.0;
    double acc = 0.0;
    for (const auto& t : terms) {
        double v = t.c * std::pow(s, t.e);
        for (int k = 0; k < t.p; ++k) v *= ls;
        acc += v;
    }
    return acc;
}

void push_term(std::vector<Term>& v, Term t) {
    if (t.c == 0.0) return;
    for (auto& u : v)
        if (u.e == t.e && u.p == t.p) {
            u.c += t.c;
            return;
        }
    v.push_back(t);
}

std::vector<Term> merge_terms(const std::vector<Term>& in) {
    std::vector<Term> out;
    for (const auto& t : in) push_term(out, t);
    std::erase_if(out, [](const Term& t) { return t.c == 0.0; });
    std::sort(out.begin(), out.end(), [](const Term& x, const Term& y) {
        return x.e != y.e ? x.e < y.e : x.p < y.p;
    });
    return out;
}

// indefinite integral of a term list
std::vector<Term> indef_terms(const std::vector<Term>& terms) {
    std::vector<Term> out;
    for (const auto& t : terms) {
        if (t.e == -1) {
            push_term(out, {0, t.p + 1, t.c / (t.p + 1)});
            continue;
        }
        // int s^e log^p = s^{e+1}/(e+1) log^p - p/(e+1) int s^e log^{p-1}
        double c = t.c;
        for (int p = t.p; p >= 0; --p) {
            push_term(out, {t.e + 1, p, c / (t.e + 1)});
            c = -c * p / (t.e + 1);
        }
    }
    return merge_terms(out);
}

// value of an antiderivative term list at s, with s == 0 meaning the limit
double eval_antideriv(const std::vector<Term>& F, double s) {
    if (s > 0.0) return eval_terms(F, s);
    double v;
    if (!terms_limit0(F, v)) throw_numeric("divergent integral near 0");
    return v;
}

bool piece_contains(const Piece& pc, double s) { return s >= pc.a && s < pc.b; }

}  // namespace

bool terms_limit0(const std::vector<Term>& terms, double& out) {
    double acc = 0.0;
    for (const auto& t : merge_terms(terms)) {
        if (t.e > 0) continue;                       // -> 0
        if (t.e == 0 && t.p == 0) { acc += t.c; continue; }
        return false;                                // log or negative power blows up
    }
    out = acc;
    return true;
}

double PiecewiseFn::eval(double s) const {
    for (const auto& pc : pieces)
        if (piece_contains(pc, s)) return eval_terms(pc.terms, s);
    return 0.0;
}

double PiecewiseFn::eval_left(double s) const {
    for (const auto& pc : pieces)
        if (s > pc.a && s <= pc.b) return eval_terms(pc.terms, s);
    return 0.0;
}

double PiecewiseFn::eval_limit0() const {
    for (const auto& pc : pieces)
        if (pc.a == 0.0 && pc.b > 0.0) {
            double v;
            if (!terms_limit0(pc.terms, v)) throw_numeric("divergent limit at 0");
            return v;
        }
    return 0.0;
}

bool PiecewiseFn::limit0_finite() const {
    for (const auto& pc : pieces)
        if (pc.a == 0.0 && pc.b > 0.0) {
            double v;
            return terms_limit0(pc.terms, v);
        }
    return true;
}

double PiecewiseFn::support_end() const {
    double s = 0.0;
    for (const auto& pc : pieces)
        if (!pc.terms.empty()) s = std::max(s, pc.b);
    return s;
}

bool PiecewiseFn::bounded_support() const {
    for (const auto& pc : pieces)
        if (!pc.terms.empty() && pc.b == kInf) return false;
    return true;
}

PiecewiseFn PiecewiseFn::scaled(double f) const {
    PiecewiseFn r = *this;
    for (auto& pc : r.pieces)
        for (auto& t : pc.terms) t.c *= f;
    r.normalize();
    return r;
}

PiecewiseFn PiecewiseFn::derivative() const {
    PiecewiseFn r;
    for (const auto& pc : pieces) {
        Piece q{pc.a, pc.b, {}};
        for (const auto& t : pc.terms) {
            push_term(q.terms, {t.e - 1, t.p, t.c * t.e});
            if (t.p > 0) push_term(q.terms, {t.e - 1, t.p - 1, t.c * t.p});
        }
        r.pieces.push_back(std::move(q));
    }
    r.normalize();
    return r;
}

double PiecewiseFn::integrate(double x, double y) const {
    if (y <= x) return 0.0;
    double acc = 0.0;
    for (const auto& pc : pieces) {
        double lo = std::max(x, pc.a), hi = std::min(y, pc.b);
        if (hi <= lo || pc.terms.empty()) continue;
        auto F = indef_terms(pc.terms);
        acc += eval_antideriv(F, hi) - eval_antideriv(F, lo);
    }
    return acc;
}

PiecewiseFn PiecewiseFn::tail_integral() const {
    if (!bounded_support()) throw_numeric("tail_integral: unbounded support");
    PiecewiseFn src = *this;
    src.normalize();
    PiecewiseFn r;
    // suffix totals: integral over pieces strictly after index i
    std::vector<double> suffix(src.pieces.size() + 1, 0.0);
    for (int i = static_cast<int>(src.pieces.size()) - 1; i >= 0; --i) {
        const auto& pc = src.pieces[i];
        if (i == 0 && pc.a == 0.0) {
            // a full-piece integral from 0 may diverge (e.g. 1/s terms); it is
            // only needed as a gap constant, and no gap precedes the first piece
            suffix[0] = suffix[1];
            break;
        }
        auto F = indef_terms(pc.terms);
        suffix[i] = suffix[i + 1] + (eval_antideriv(F, pc.b) - eval_antideriv(F, pc.a));
    }
    double prev_end = 0.0;
    for (size_t i = 0; i < src.pieces.size(); ++i) {
        const auto& pc = src.pieces[i];
        if (pc.a > prev_end) {
            // gap: function is 0 there, tail is the constant suffix
            Piece gap{prev_end, pc.a, {}};
            push_term(gap.terms, {0, 0, suffix[i]});
            r.pieces.push_back(std::move(gap));
        }
        // on [a,b): G(s) = F(b) - F(s) + suffix_{i+1}
        auto F = indef_terms(pc.terms);
        Piece q{pc.a, pc.b, {}};
        for (const auto& t : F) push_term(q.terms, {t.e, t.p, -t.c});
        push_term(q.terms, {0, 0, eval_antideriv(F, pc.b) + suffix[i + 1]});
        r.pieces.push_back(std::move(q));
        prev_end = pc.b;
    }
    if (src.pieces.empty()) return r;
    if (src.pieces.front().a > 0.0 && r.pieces.front().a > 0.0) {
        Piece lead{0.0, r.pieces.front().a, {}};
        push_term(lead.terms, {0, 0, suffix[0]});
        r.pieces.insert(r.pieces.begin(), std::move(lead));
    }
    r.normalize();
    return r;
}

PiecewiseFn PiecewiseFn::mul_monomial(int e0, int p0) const {
    PiecewiseFn r = *this;
    for (auto& pc : r.pieces)
        for (auto& t : pc.terms) {
            t.e += e0;
            t.p += p0;
        }
    return r;
}

std::vector<double> PiecewiseFn::knots() const {
    std::vector<double> k;
    for (const auto& pc : pieces) {
        k.push_back(pc.a);
        if (pc.b != kInf) k.push_back(pc.b);
    }
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    return k;
}

int PiecewiseFn::max_log_power() const {
    int p = 0;
    for (const auto& pc : pieces)
        for (const auto& t : pc.terms) p = std::max(p, t.p);
    return p;
}

int PiecewiseFn::min_exponent() const {
    int e = 0;
    for (const auto& pc : pieces)
        for (const auto& t : pc.terms) e = std::min(e, t.e);
    return e;
}

int PiecewiseFn::max_exponent() const {
    int e = 0;
    for (const auto& pc : pieces)
        for (const auto& t : pc.terms) e = std::max(e, t.e);
    return e;
}

void PiecewiseFn::normalize() {
    for (auto& pc : pieces) pc.terms = merge_terms(pc.terms);
    std::erase_if(pieces, [](const Piece& pc) { return pc.b <= pc.a || pc.terms.empty(); });
    std::sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
    for (size_t i = 0; i + 1 < pieces.size(); ++i)
        if (pieces[i].b > pieces[i + 1].a + 1e-15 * std::max(1.0, pieces[i + 1].a))
            throw_numeric("PiecewiseFn: overlapping pieces");
    // merge adjacent pieces with identical term lists
    std::vector<Piece> out;
    for (auto& pc : pieces) {
        if (!out.empty() && out.back().b == pc.a && out.back().terms.size() == pc.terms.size()) {
            bool same = true;
            for (size_t i = 0; i < pc.terms.size(); ++i) {
                const auto& x = out.back().terms[i];
                const auto& y = pc.terms[i];
                if (x.e != y.e || x.p != y.p || x.c != y.c) { same = false; break; }
            }
            if (same) { out.back().b = pc.b; continue; }
        }
        out.push_back(std::move(pc));
    }
    pieces = std::move(out);
}

PiecewiseFn PiecewiseFn::poly(double a, double b, const std::vector<double>& coeffs, int e0) {
    PiecewiseFn r;
    Piece pc{a, b, {}};
    for (size_t i = 0; i < coeffs.size(); ++i)
        push_term(pc.terms, {e0 + static_cast<int>(i), 0, coeffs[i]});
    r.pieces.push_back(std::move(pc));
    r.normalize();
    return r;
}

namespace {

std::vector<double> union_knots(const PiecewiseFn& f, const PiecewiseFn& g, bool& unbounded) {
    std::vector<double> k = f.knots();
    auto kg = g.knots();
    k.insert(k.end(), kg.begin(), kg.end());
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end(), [](double x, double y) {
                return std::fabs(x - y) <= 1e-13 * std::max({1.0, std::fabs(x), std::fabs(y)});
            }),
            k.end());
    unbounded = !f.bounded_support() || !g.bounded_support();
    return k;
}

std::vector<Term> terms_at(const PiecewiseFn& f, double a, double b) {
    double mid = (b == kInf) ? a + 1.0 : 0.5 * (a + b);
    for (const auto& pc : f.pieces)
        if (piece_contains(pc, mid)) return pc.terms;
    return {};
}

}  // namespace

PiecewiseFn add(const PiecewiseFn& f, const PiecewiseFn& g) {
    bool unb = false;
    auto k = union_knots(f, g, unb);
    PiecewiseFn r;
    for (size_t i = 0; i + 1 <= k.size(); ++i) {
        double a = k[i];
        double b = (i + 1 < k.size()) ? k[i + 1] : kInf;
        if (i + 1 == k.size() && !unb) break;
        Piece pc{a, b, {}};
        for (const auto& t : terms_at(f, a, b)) push_term(pc.terms, t);
        for (const auto& t : terms_at(g, a, b)) push_term(pc.terms, t);
        r.pieces.push_back(std::move(pc));
    }
    r.normalize();
    return r;
}

PiecewiseFn multiply(const PiecewiseFn& f, const PiecewiseFn& g) {
    bool unb = false;
    auto k = union_knots(f, g, unb);
    PiecewiseFn r;
    for (size_t i = 0; i + 1 <= k.size(); ++i) {
        double a = k[i];
        double b = (i + 1 < k.size()) ? k[i + 1] : kInf;
        if (i + 1 == k.size() && !unb) break;
        Piece pc{a, b, {}};
        for (const auto& tf : terms_at(f, a, b))
            for (const auto& tg : terms_at(g, a, b))
                push_term(pc.terms, {tf.e + tg.e, tf.p + tg.p, tf.c * tg.c});
        r.pieces.push_back(std::move(pc));
    }
    r.normalize();
    return r;
}

double coeff_distance(const PiecewiseFn& f, const PiecewiseFn& g) {
    bool unb = false;
    auto k = union_knots(f, g, unb);
    double d = 0.0;
    for (size_t i = 0; i + 1 <= k.size(); ++i) {
        double a = k[i];
        double b = (i + 1 < k.size()) ? k[i + 1] : kInf;
        if (i + 1 == k.size() && !unb) break;
        std::map<std::pair<int, int>, double> m;
        for (const auto& t : terms_at(f, a, b)) m[{t.e, t.p}] += t.c;
        for (const auto& t : terms_at(g, a, b)) m[{t.e, t.p}] -= t.c;
        for (const auto& [_, c] : m) d = std::max(d, std::fabs(c));
    }
    return d;
}

}  // namespace fivol
