#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mat.hpp"
#include "pwfn.hpp"

namespace fivol {

// Extended real value: finite or +inf (never -inf).
struct ExtReal {
    double v = 0.0;
    bool finite = true;

    static ExtReal inf() { return {0.0, false}; }
    static ExtReal of(double x) { return {x, true}; }
};

enum class Variant {
    Quadratic,      // 0.5 x'Qx + <b,x> + c
    RadialProfile,  // phi(|x|) on [0, dom_radius], +inf outside
    IndicatorBall,
    IndicatorBox,
    SupportBall,    // rho |x|
    SupportBox,     // sum h_i |x_i|  (conjugate of the box indicator)
    UT,             // u_t = t|x| + I_{B^n}
    VT,             // v_t = max(|x| - t, 0)
    EpiSum,         // infimal convolution of lambda_i * epi-scaled children
    Sum,            // sum of lambda_i * children
    Shift,          // child(x - tau) + gamma
};

struct FunctionSpec;
using SpecPtr = std::shared_ptr<const FunctionSpec>;

struct SpecTerm {
    double lambda = 1.0;
    SpecPtr f;
};

struct FunctionSpec {
    Variant variant = Variant::Quadratic;
    int n = 0;

    SymMat Q;          // Quadratic
    Vec b;
    double c = 0.0;

    PiecewiseFn profile;        // RadialProfile
    double dom_radius = kInf;

    double rho = 1.0;  // balls
    Vec halfwidths;    // boxes
    double t = 0.0;    // u_t / v_t

    std::vector<SpecTerm> terms;  // EpiSum / Sum

    SpecPtr child;  // Shift
    Vec tau;
    double gamma = 0.0;
};

// constructors
SpecPtr make_quadratic(const SymMat& Q, const Vec& b, double c);
SpecPtr make_radial(int n, const PiecewiseFn& profile, double dom_radius = kInf);
SpecPtr make_indicator_ball(int n, double rho);
SpecPtr make_indicator_box(const Vec& halfwidths);
SpecPtr make_support_ball(int n, double rho);
SpecPtr make_support_box(const Vec& halfwidths);
SpecPtr make_ut(int n, double t);
SpecPtr make_vt(int n, double t);
SpecPtr make_sum(std::vector<SpecTerm> terms);
SpecPtr make_episum(std::vector<SpecTerm> terms);
SpecPtr make_shift(SpecPtr child, const Vec& tau, double gamma);
SpecPtr make_half_h_squared(int n);  // 0.5 |x|^2 as a quadratic

ExtReal evaluate(const SpecPtr& f, const Vec& x);
Vec gradient(const SpecPtr& f, const Vec& x);
SymMat hessian(const SpecPtr& f, const Vec& x);

SpecPtr conjugate(const SpecPtr& f);

SpecPtr inf_convolve(const SpecPtr& f, const SpecPtr& g);
SpecPtr epi_scale(double lambda, const SpecPtr& f);

// nullopt = rejected (min not convex / pair unsupported); otherwise {min, max}
std::optional<std::pair<SpecPtr, SpecPtr>> pointwise_min_max(const SpecPtr& f, const SpecPtr& g);

bool is_supercoercive(const SpecPtr& f);
bool is_finite_valued(const SpecPtr& f);

// exact radial reduction: value phi(|x|) for |x| <= R, else +inf
struct RadialForm {
    PiecewiseFn phi;
    double R = kInf;
};
std::optional<RadialForm> as_radial(const SpecPtr& f);

// decomposition of a finite convex function into radial + quadratic parts,
// the carrier used by the Monge-Ampere engines
struct DualParts {
    int n = 0;
    PiecewiseFn phi;  // radial profile part (may extend to infinity)
    SymMat Q;
    Vec b;
    double c = 0.0;
    bool has_quadratic = false;  // true if Q contributes
};
std::optional<DualParts> dual_decompose(const SpecPtr& f);

// reduction of indicator-type specs (incl. epi-sums of indicators) to the
// Minkowski body box + rho * B^n
struct IndicatorBody {
    int n = 0;
    double rho = 0.0;
    Vec box_halfwidths;  // n == 0 when there is no box part
    bool has_box = false;
};
std::optional<IndicatorBody> as_indicator_body(const SpecPtr& f);

// scalar Legendre transform of a convex nondecreasing profile on [0, R]
struct ScalarConjugate {
    PiecewiseFn phi;
    double R = kInf;
};
ScalarConjugate profile_conjugate(const PiecewiseFn& phi, double R);

std::string spec_to_json(const SpecPtr& f);
SpecPtr spec_from_json(const std::string& text);

}  // namespace fivol
