#pragma once

#include <limits>
#include <vector>

#include "error.hpp"

namespace fivol {

// Exact piecewise functions on [0, inf) built from terms c * s^e * log(s)^p
// with integer e (possibly negative) and integer p >= 0. The family is closed
// under addition, multiplication, differentiation and integration, which is
// what makes the R-transforms exact (an exponent -1 integrates to a log
// rather than being rejected).

struct Term {
    int e = 0;   // power of s
    int p = 0;   // power of log s
    double c = 0.0;
};

struct Piece {
    double a = 0.0, b = 0.0;  // interval [a, b); b may be +inf for profiles
    std::vector<Term> terms;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct PiecewiseFn {
    std::vector<Piece> pieces;  // sorted by a, disjoint; function is 0 elsewhere

    double eval(double s) const;
    double eval_left(double s) const;       // limit from the left (pieces are [a,b))
    double eval_limit0() const;             // lim_{s->0+}; throws if divergent
    bool limit0_finite() const;

    double support_end() const;             // sup of the support (0 if empty)
    bool bounded_support() const;

    PiecewiseFn scaled(double f) const;
    PiecewiseFn derivative() const;
    // definite integral over [x, y] (x may be 0 when the limit exists)
    double integrate(double x, double y) const;
    // G(s) = int_s^inf f(t) dt as a PiecewiseFn (requires bounded support)
    PiecewiseFn tail_integral() const;
    // f(s) * s^e0 * log(s)^p0
    PiecewiseFn mul_monomial(int e0, int p0) const;

    std::vector<double> knots() const;      // all interval endpoints (finite)
    int max_log_power() const;
    int min_exponent() const;
    int max_exponent() const;

    void normalize();                        // merge terms, drop zeros/empties

    static PiecewiseFn zero() { return {}; }
    // polynomial piece on [a,b) with coefficients by ascending exponent from e0
    static PiecewiseFn poly(double a, double b, const std::vector<double>& coeffs, int e0 = 0);
};

PiecewiseFn add(const PiecewiseFn& f, const PiecewiseFn& g);
PiecewiseFn multiply(const PiecewiseFn& f, const PiecewiseFn& g);
// max |f - g| proxy: largest coefficient difference after aligning pieces
double coeff_distance(const PiecewiseFn& f, const PiecewiseFn& g);

// limit of sum of terms as s -> 0+: returns false (divergent) or value
bool terms_limit0(const std::vector<Term>& terms, double& out);

}  // namespace fivol
