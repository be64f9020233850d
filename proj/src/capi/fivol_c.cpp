#include "fivol.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "bodies.hpp"
#include "density.hpp"
#include "funcspec.hpp"
#include "intrinsic.hpp"
#include "measures.hpp"
#include "pwfn_json.hpp"
#include "steiner.hpp"

using namespace fivol;

struct fivol_function {
    SpecPtr spec;
};
struct fivol_density {
    Density d;
};
struct fivol_report {
    SteinerReport rep;
};

namespace {

thread_local std::string g_last_error;

fivol_status to_status(const Error& e) {
    g_last_error = e.what();
    switch (e.code()) {
        case ErrorCode::Tolerance: return FIVOL_ERR_TOLERANCE;
        case ErrorCode::Parse: return FIVOL_ERR_PARSE;
        case ErrorCode::Class: return FIVOL_ERR_CLASS;
        case ErrorCode::Numeric: return FIVOL_ERR_NUMERIC;
    }
    return FIVOL_ERR_NUMERIC;
}

template <typename F>
fivol_status guarded(F&& body) {
    try {
        body();
        return FIVOL_OK;
    } catch (const Error& e) {
        return to_status(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return FIVOL_ERR_NUMERIC;
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

Side to_side(int side) {
    if (side == 0) return Side::Primal;
    if (side == 1) return Side::Dual;
    throw_parse("side must be 0 (primal) or 1 (dual)");
}

Repr to_repr(int repr) {
    switch (repr) {
        case 0: return Repr::Auto;
        case 1: return Repr::SmoothHessian;
        case 2: return Repr::DualHessian;
        case 3: return Repr::MeasureAlpha;
        case 4: return Repr::TauCurvature;
        case 5: return Repr::Oracle;
    }
    throw_parse("unknown representation id");
}

std::vector<double> node_vector(int n, const double* r_nodes, int n_nodes) {
    if (!r_nodes || n_nodes <= 0) return default_r_nodes(n);
    return std::vector<double>(r_nodes, r_nodes + n_nodes);
}

void require(const void* p, const char* what) {
    if (!p) throw_parse(std::string("null ") + what);
}

}  // namespace

extern "C" {

const char* fivol_version(void) { return "fivol 1.0.0"; }

const char* fivol_last_error(void) { return g_last_error.c_str(); }

void fivol_string_free(char* s) { delete[] s; }

fivol_status fivol_function_parse(const char* json, fivol_function** out) {
    return guarded([&] {
        require(json, "json");
        require(out, "out");
        *out = new fivol_function{spec_from_json(json)};
    });
}

void fivol_function_free(fivol_function* f) { delete f; }

fivol_status fivol_function_to_json(const fivol_function* f, char** out) {
    return guarded([&] {
        require(f, "function");
        require(out, "out");
        *out = dup_string(spec_to_json(f->spec));
    });
}

fivol_status fivol_function_conjugate(const fivol_function* f, fivol_function** out) {
    return guarded([&] {
        require(f, "function");
        require(out, "out");
        *out = new fivol_function{conjugate(f->spec)};
    });
}

int fivol_function_dim(const fivol_function* f) { return f ? f->spec->n : 0; }

fivol_status fivol_function_eval(const fivol_function* f, const double* x, int n,
                                 double* value, int* is_finite) {
    return guarded([&] {
        require(f, "function");
        require(x, "x");
        if (n != f->spec->n) throw_parse("dimension mismatch in eval");
        Vec p(n);
        for (int i = 0; i < n; ++i) p[i] = x[i];
        ExtReal v = evaluate(f->spec, p);
        if (value) *value = v.finite ? v.v : 0.0;
        if (is_finite) *is_finite = v.finite ? 1 : 0;
    });
}

fivol_status fivol_density_parse(const char* json, fivol_density** out) {
    return guarded([&] {
        require(json, "json");
        require(out, "out");
        *out = new fivol_density{density_from_json(json)};
    });
}

void fivol_density_free(fivol_density* d) { delete d; }

fivol_status fivol_density_to_json(const fivol_density* d, char** out) {
    return guarded([&] {
        require(d, "density");
        require(out, "out");
        *out = dup_string(density_to_json(d->d));
    });
}

fivol_status fivol_density_hat(fivol_density** out) {
    return guarded([&] {
        require(out, "out");
        *out = new fivol_density{hat_density()};
    });
}

double fivol_density_eval(const fivol_density* d, double s) {
    return d ? d->d.eval(s) : 0.0;
}

fivol_status fivol_class_check(const fivol_density* d, int j, int n, int* member,
                               double* limit_s_pow, double* limit_integral) {
    return guarded([&] {
        require(d, "density");
        HadClassCheck c = class_check(d->d, j, n);
        if (member) *member = c.member ? 1 : 0;
        if (limit_s_pow) *limit_s_pow = c.s_pow_finite ? c.limit_s_pow : 0.0;
        if (limit_integral) *limit_integral = c.integral_finite ? c.limit_integral : 0.0;
    });
}

fivol_status fivol_transform_R(const fivol_density* d, int l, fivol_density** out) {
    return guarded([&] {
        require(d, "density");
        require(out, "out");
        *out = new fivol_density{transform_R(d->d, l)};
    });
}

fivol_status fivol_transform_R_inv(const fivol_density* d, int l, fivol_density** out) {
    return guarded([&] {
        require(d, "density");
        require(out, "out");
        *out = new fivol_density{transform_R_inv(d->d, l)};
    });
}

fivol_status fivol_steiner_density(const fivol_density* d, int n, int j, fivol_density** out) {
    return guarded([&] {
        require(d, "density");
        require(out, "out");
        auto zs = steiner_densities(d->d, n);
        if (j < 0 || j > n) throw_parse("steiner density index out of range");
        *out = new fivol_density{zs[j]};
    });
}

fivol_status fivol_fiv(const fivol_function* f, int side, int j, const fivol_density* zeta,
                       int repr, double* out) {
    return guarded([&] {
        require(f, "function");
        require(zeta, "density");
        require(out, "out");
        *out = fiv(to_side(side), f->spec, j, zeta->d, to_repr(repr));
    });
}

fivol_status fivol_fiv_oracle_ut(double t, int j, int n, const fivol_density* zeta, double* out) {
    return guarded([&] {
        require(zeta, "density");
        require(out, "out");
        *out = fiv_oracle_ut(t, j, n, zeta->d);
    });
}

fivol_status fivol_fiv_indicator(const char* body_json, int j, const fivol_density* zeta,
                                 double* out) {
    return guarded([&] {
        require(body_json, "body json");
        require(zeta, "density");
        require(out, "out");
        *out = fiv_indicator(body_from_json(body_json), j, zeta->d);
    });
}

fivol_status fivol_classical_volumes(const char* body_json, double* out_v, int cap, int* n_out) {
    return guarded([&] {
        require(body_json, "body json");
        require(out_v, "out");
        ClassicalBody K = body_from_json(body_json);
        auto vs = classical_intrinsic_volumes(K);
        if ((int)vs.size() > cap) throw_parse("output buffer too small");
        for (size_t i = 0; i < vs.size(); ++i) out_v[i] = vs[i];
        if (n_out) *n_out = K.n;
    });
}

fivol_status fivol_cross_representation_check(const fivol_function* f, int side, int j,
                                              const fivol_density* zeta, double* dual_hessian,
                                              double* measure_alpha, double* rel_discrepancy) {
    return guarded([&] {
        require(f, "function");
        require(zeta, "density");
        CrossCheck c = cross_representation_check(to_side(side), f->spec, j, zeta->d);
        if (dual_hessian) *dual_hessian = c.dual_hessian;
        if (measure_alpha) *measure_alpha = c.measure_alpha;
        if (rel_discrepancy) *rel_discrepancy = c.rel_discrepancy;
    });
}

fivol_status fivol_ma_integral(const fivol_function* v, const fivol_density* beta, double* out) {
    return guarded([&] {
        require(v, "function");
        require(beta, "density");
        require(out, "out");
        *out = ma_integral(v->spec, beta->d);
    });
}

fivol_status fivol_mixed_ma_integral(const fivol_function* const* vs, int count,
                                     const fivol_density* beta, double* out) {
    return guarded([&] {
        require(vs, "functions");
        require(beta, "density");
        require(out, "out");
        std::vector<SpecPtr> specs;
        for (int i = 0; i < count; ++i) {
            require(vs[i], "function");
            specs.push_back(vs[i]->spec);
        }
        *out = mixed_ma_integral(specs, beta->d);
    });
}

fivol_status fivol_conj_ma_integral(const fivol_function* u, const fivol_density* beta,
                                    double* out) {
    return guarded([&] {
        require(u, "function");
        require(beta, "density");
        require(out, "out");
        *out = conj_ma_integral(u->spec, beta->d);
    });
}

fivol_status fivol_theta_j_integral(const fivol_function* v, int j, const fivol_density* alpha,
                                    double* out) {
    return guarded([&] {
        require(v, "function");
        require(alpha, "density");
        require(out, "out");
        *out = theta_j_integral(v->spec, j, alpha->d);
    });
}

fivol_status fivol_theta_star_j_integral(const fivol_function* u, int j,
                                         const fivol_density* alpha, double* out) {
    return guarded([&] {
        require(u, "function");
        require(alpha, "density");
        require(out, "out");
        *out = theta_star_j_integral(u->spec, j, alpha->d);
    });
}

fivol_status fivol_default_r_nodes(int n, double* out, int cap, int* count) {
    return guarded([&] {
        require(out, "out");
        auto nodes = default_r_nodes(n);
        if ((int)nodes.size() > cap) throw_parse("output buffer too small");
        for (size_t i = 0; i < nodes.size(); ++i) out[i] = nodes[i];
        if (count) *count = (int)nodes.size();
    });
}

fivol_status fivol_steiner_verify(const fivol_function* u, const fivol_density* zeta,
                                  const double* r_nodes, int n_nodes, fivol_report** out) {
    return guarded([&] {
        require(u, "function");
        require(zeta, "density");
        require(out, "out");
        auto nodes = node_vector(u->spec->n, r_nodes, n_nodes);
        *out = new fivol_report{steiner_verify(u->spec, zeta->d, nodes)};
    });
}

fivol_status fivol_dual_steiner_verify(const fivol_function* v, const fivol_density* zeta,
                                       const double* r_nodes, int n_nodes, fivol_report** out) {
    return guarded([&] {
        require(v, "function");
        require(zeta, "density");
        require(out, "out");
        auto nodes = node_vector(v->spec->n, r_nodes, n_nodes);
        *out = new fivol_report{dual_steiner_verify(v->spec, zeta->d, nodes)};
    });
}

fivol_status fivol_dual_steiner_quadratic_verify(const fivol_function* v,
                                                 const fivol_density* zeta,
                                                 const double* r_nodes, int n_nodes,
                                                 fivol_report** out) {
    return guarded([&] {
        require(v, "function");
        require(zeta, "density");
        require(out, "out");
        auto nodes = node_vector(v->spec->n, r_nodes, n_nodes);
        *out = new fivol_report{dual_steiner_quadratic_verify(v->spec, zeta->d, nodes)};
    });
}

fivol_status fivol_retrieve_classical(const char* body_json, const fivol_density* zeta,
                                      const double* r_nodes, int n_nodes, fivol_report** out) {
    return guarded([&] {
        require(body_json, "body json");
        require(zeta, "density");
        require(out, "out");
        ClassicalBody K = body_from_json(body_json);
        auto nodes = node_vector(K.n, r_nodes, n_nodes);
        *out = new fivol_report{classical_steiner_retrieve(K, zeta->d, nodes)};
    });
}

fivol_status fivol_steiner_derivative_extract(const fivol_function* u, int j,
                                              const fivol_density* zeta, double* out) {
    return guarded([&] {
        require(u, "function");
        require(zeta, "density");
        require(out, "out");
        *out = steiner_derivative_extract(u->spec, j, zeta->d);
    });
}

void fivol_report_free(fivol_report* rep) { delete rep; }

int fivol_report_dim(const fivol_report* rep) { return rep ? rep->rep.n : 0; }

int fivol_report_num_nodes(const fivol_report* rep) {
    return rep ? (int)rep->rep.r_nodes.size() : 0;
}

int fivol_report_polynomiality_ok(const fivol_report* rep) {
    return rep && rep->rep.polynomiality_ok ? 1 : 0;
}

double fivol_report_fit_residual(const fivol_report* rep) {
    return rep ? rep->rep.fit_residual : 0.0;
}

fivol_status fivol_report_get(const fivol_report* rep, const char* field, int index,
                              double* out) {
    return guarded([&] {
        require(rep, "report");
        require(field, "field");
        require(out, "out");
        const SteinerReport& r = rep->rep;
        const std::vector<double>* v = nullptr;
        std::string f = field;
        if (f == "r_node") v = &r.r_nodes;
        else if (f == "lhs") v = &r.lhs_values;
        else if (f == "rhs_coefficient") v = &r.rhs_coefficients;
        else if (f == "fitted_coefficient") v = &r.fitted_coefficients;
        else if (f == "rel_error") v = &r.per_coefficient_rel_error;
        else if (f == "recovered_vj") v = &r.recovered_vj;
        else throw_parse("unknown report field '" + f + "'");
        if (index < 0 || index >= (int)v->size()) throw_parse("report index out of range");
        *out = (*v)[index];
    });
}

fivol_status fivol_phi_beta_solve(const fivol_density* alpha, const char* phi_json, int j,
                                  int n, const double* ts, double* out_values, int count,
                                  double* max_validation_error) {
    return guarded([&] {
        require(alpha, "density");
        require(phi_json, "phi json");
        PhiProfile phi;
        phi.phi = pwfn_from_json(nlohmann::json::parse(phi_json, nullptr, false),
                                 /*allow_unbounded=*/true);
        BetaSolution sol = general_phi_beta_solve(alpha->d, phi, j, n);
        for (int i = 0; i < count; ++i) {
            require(ts, "sample points");
            require(out_values, "out values");
            out_values[i] = sol.eval(ts[i]);
        }
        if (max_validation_error) *max_validation_error = sol.max_validation_error;
    });
}

}  // extern "C"
