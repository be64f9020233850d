// Command-line front end: batch evaluation, verification sweeps, and report
// emission (CSV, optional SVG). Talks to the library exclusively through the
// C API in fivol.h.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fivol.h"

namespace {

struct CliError {
    int status;
    std::string message;
};

[[noreturn]] void fail(int status, const std::string& msg) { throw CliError{status, msg}; }

void check(fivol_status st) {
    if (st != FIVOL_OK) fail((int)st, fivol_last_error());
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(2, "cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) fail(2, "cannot write file: " + path);
    out << content;
}

std::string csv_header() { return std::string("# fivol csv v1 (") + fivol_version() + ")\n"; }

struct DensityHandle {
    fivol_density* d = nullptr;
    ~DensityHandle() { fivol_density_free(d); }
};

struct FunctionHandle {
    fivol_function* f = nullptr;
    ~FunctionHandle() { fivol_function_free(f); }
};

struct ReportHandle {
    fivol_report* r = nullptr;
    ~ReportHandle() { fivol_report_free(r); }
};

void load_density(const std::string& path, DensityHandle& out) {
    if (path == "hat") {
        check(fivol_density_hat(&out.d));
        return;
    }
    check(fivol_density_parse(read_file(path).c_str(), &out.d));
}

void load_function(const std::string& path, FunctionHandle& out) {
    check(fivol_function_parse(read_file(path).c_str(), &out.f));
}

int repr_id(const std::string& name) {
    if (name == "auto") return 0;
    if (name == "smooth_hessian") return 1;
    if (name == "dual_hessian") return 2;
    if (name == "measure_alpha") return 3;
    if (name == "tau_curvature") return 4;
    if (name == "oracle") return 5;
    fail(2, "unknown representation: " + name);
}

std::vector<double> resolve_nodes(int n, const std::vector<double>& user) {
    if (!user.empty()) return user;
    std::vector<double> nodes(n + 3);
    int count = 0;
    check(fivol_default_r_nodes(n, nodes.data(), (int)nodes.size(), &count));
    nodes.resize(count);
    return nodes;
}

double report_get(fivol_report* r, const char* field, int index) {
    double v = 0.0;
    check(fivol_report_get(r, field, index, &v));
    return v;
}

// minimal static line chart: lhs samples as dots, fitted polynomial as a line
void write_svg(const std::string& path, fivol_report* rep) {
    int n = fivol_report_dim(rep);
    int m = fivol_report_num_nodes(rep);
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    std::vector<double> xs(m), ys(m);
    for (int i = 0; i < m; ++i) {
        xs[i] = report_get(rep, "r_node", i);
        ys[i] = report_get(rep, "lhs", i);
        xmin = std::min(xmin, xs[i]);
        xmax = std::max(xmax, xs[i]);
        ymin = std::min(ymin, ys[i]);
        ymax = std::max(ymax, ys[i]);
    }
    if (ymax <= ymin) ymax = ymin + 1.0;
    const double W = 640, H = 400, pad = 40;
    auto px = [&](double x) { return pad + (x - xmin) / (xmax - xmin) * (W - 2 * pad); };
    auto py = [&](double y) { return H - pad - (y - ymin) / (ymax - ymin) * (H - 2 * pad); };
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (int k = 0; k <= 200; ++k) {
        double r = xmin + (xmax - xmin) * k / 200.0;
        double y = 0.0, pw = 1.0;
        for (int j = n; j >= 0; --j) {  // fitted coefficient of r^{n-j}, j descending => powers ascending
            y += report_get(rep, "fitted_coefficient", j) * pw;
            pw *= r;
        }
        svg << fmt(px(r)) << "," << fmt(py(y)) << " ";
    }
    svg << "\"/>\n";
    for (int i = 0; i < m; ++i)
        svg << "<circle cx=\"" << fmt(px(xs[i])) << "\" cy=\"" << fmt(py(ys[i]))
            << "\" r=\"3\" fill=\"crimson\"/>\n";
    svg << "<text x=\"" << pad << "\" y=\"20\" font-size=\"12\">steiner lhs vs fitted polynomial"
        << "</text>\n</svg>\n";
    write_output(path, svg.str());
}

std::string report_csv(fivol_report* rep, const std::string& extra_col = "",
                       const std::vector<double>& extra = {}) {
    int n = fivol_report_dim(rep);
    int m = fivol_report_num_nodes(rep);
    std::ostringstream csv;
    csv << csv_header();
    csv << "row_type,index,r,lhs,fitted,rhs,rel_error";
    if (!extra_col.empty()) csv << "," << extra_col;
    csv << "\n";
    for (int i = 0; i < m; ++i) {
        csv << "node," << i << "," << fmt(report_get(rep, "r_node", i)) << ","
            << fmt(report_get(rep, "lhs", i)) << ",,,";
        if (!extra_col.empty()) csv << ",";
        csv << "\n";
    }
    for (int j = 0; j <= n; ++j) {
        csv << "coefficient," << j << ",,," << fmt(report_get(rep, "fitted_coefficient", j))
            << "," << fmt(report_get(rep, "rhs_coefficient", j)) << ","
            << fmt(report_get(rep, "rel_error", j));
        if (!extra_col.empty())
            csv << "," << (j < (int)extra.size() ? fmt(extra[j]) : "");
        csv << "\n";
    }
    csv << "summary,,,,,," << "\n";
    csv << "fit_residual," << fmt(fivol_report_fit_residual(rep)) << ",,,,,\n";
    csv << "polynomiality_ok," << fivol_report_polynomiality_ok(rep) << ",,,,,\n";
    return csv.str();
}

int check_report_tolerance(fivol_report* rep, double tol) {
    if (!fivol_report_polynomiality_ok(rep)) return 1;
    int n = fivol_report_dim(rep);
    for (int j = 0; j <= n; ++j)
        if (report_get(rep, "rel_error", j) > tol) return 1;
    return 0;
}

std::string phi_preset_json(const std::string& name) {
    if (name == "t")
        return R"([{"interval":[0,null],"coefficients":{"1":1}}])";
    if (name == "t2over2")
        return R"([{"interval":[0,null],"coefficients":{"2":0.5}}])";
    if (name == "t_plus_t2")
        return R"([{"interval":[0,null],"coefficients":{"1":1,"2":1}}])";
    return "";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fivol: functional intrinsic volumes of convex functions"};
    app.require_subcommand(1);

    // shared option storage
    std::string fn_path, density_path, out_path, svg_path, body_path;
    std::string side = "primal", repr = "auto", op, kind = "ma", phi_arg = "t";
    int j = 0, l = 1, n = 2, samples = 20;
    double tol = 1e-6;
    std::vector<double> t_values, r_nodes;
    bool quadratic = false;

    auto* c_fiv = app.add_subcommand("fiv", "functional intrinsic volume of one function");
    c_fiv->add_option("--function", fn_path, "function spec JSON")->required();
    c_fiv->add_option("--density", density_path, "density JSON path, or 'hat'")->required();
    c_fiv->add_option("--j", j, "degree")->required();
    c_fiv->add_option("--side", side, "primal|dual");
    c_fiv->add_option("--repr", repr, "representation");
    c_fiv->add_option("--n", n, "expected dimension (checked)");
    c_fiv->add_option("--t", t_values, "sweep values substituted for the spec's t field");
    c_fiv->add_option("--out", out_path, "CSV output path (default stdout)");

    auto* c_sv = app.add_subcommand("steiner-verify", "primal functional Steiner formula");
    c_sv->add_option("--function", fn_path)->required();
    c_sv->add_option("--density", density_path)->required();
    c_sv->add_option("--r-nodes", r_nodes, "fit nodes (default Chebyshev n+3 on [0.1,2.1])");
    c_sv->add_option("--tol", tol, "per-coefficient relative tolerance");
    c_sv->add_option("--out", out_path);
    c_sv->add_option("--svg", svg_path, "optional SVG chart path");

    auto* c_dsv = app.add_subcommand("dual-steiner-verify", "dual functional Steiner formula");
    c_dsv->add_option("--function", fn_path)->required();
    c_dsv->add_option("--density", density_path)->required();
    c_dsv->add_option("--r-nodes", r_nodes);
    c_dsv->add_option("--tol", tol);
    c_dsv->add_flag("--quadratic", quadratic, "use the 0.5 r h_B^2 expansion variant");
    c_dsv->add_option("--out", out_path);
    c_dsv->add_option("--svg", svg_path);

    auto* c_tr = app.add_subcommand("transform", "R-transforms of a density");
    c_tr->add_option("--density", density_path)->required();
    c_tr->add_option("--op", op, "R|Rinv|steiner")->required();
    c_tr->add_option("--l", l, "transform order (R/Rinv)");
    c_tr->add_option("--n", n, "dimension (steiner)");
    c_tr->add_option("--j", j, "index (steiner)");
    c_tr->add_option("--out", out_path);

    auto* c_rc = app.add_subcommand("retrieve-classical", "classical intrinsic volumes via Steiner");
    c_rc->add_option("--body", body_path, "ball/box JSON")->required();
    c_rc->add_option("--density", density_path)->required();
    c_rc->add_option("--r-nodes", r_nodes);
    c_rc->add_option("--tol", tol);
    c_rc->add_option("--out", out_path);

    auto* c_mi = app.add_subcommand("measure-integral", "Monge-Ampere measure integrals");
    c_mi->add_option("--function", fn_path)->required();
    c_mi->add_option("--density", density_path)->required();
    c_mi->add_option("--kind", kind, "ma|conj|theta|theta-star");
    c_mi->add_option("--j", j, "degree (theta kinds)");
    c_mi->add_option("--out", out_path);

    auto* c_ps = app.add_subcommand("phi-steiner", "general-phi beta solver");
    c_ps->add_option("--alpha", density_path, "density JSON path, or 'hat'")->required();
    c_ps->add_option("--phi", phi_arg, "preset t|t2over2|t_plus_t2 or profile JSON path");
    c_ps->add_option("--j", j)->required();
    c_ps->add_option("--n", n)->required();
    c_ps->add_option("--samples", samples, "number of beta sample points");
    c_ps->add_option("--out", out_path);

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_fiv->parsed()) {
            DensityHandle d;
            load_density(density_path, d);
            std::string text = read_file(fn_path);
            std::ostringstream csv;
            csv << csv_header() << "t,side,n,j,repr,value\n";
            std::vector<double> sweep = t_values.empty() ? std::vector<double>{NAN} : t_values;
            for (double t : sweep) {
                std::string spec = text;
                if (!std::isnan(t)) {
                    auto obj = nlohmann::json::parse(text, nullptr, false);
                    if (obj.is_discarded() || !obj.is_object())
                        fail(2, "function spec is not a JSON object");
                    obj["t"] = t;
                    spec = obj.dump();
                }
                FunctionHandle f;
                check(fivol_function_parse(spec.c_str(), &f.f));
                if (c_fiv->count("--n") && fivol_function_dim(f.f) != n)
                    fail(2, "function dimension does not match --n");
                double value = 0.0;
                check(fivol_fiv(f.f, side == "dual" ? 1 : 0, j, d.d, repr_id(repr), &value));
                csv << (std::isnan(t) ? "" : fmt(t)) << "," << side << ","
                    << fivol_function_dim(f.f) << "," << j << "," << repr << "," << fmt(value)
                    << "\n";
            }
            write_output(out_path, csv.str());
            return 0;
        }

        if (c_sv->parsed() || c_dsv->parsed()) {
            DensityHandle d;
            load_density(density_path, d);
            FunctionHandle f;
            load_function(fn_path, f);
            auto nodes = resolve_nodes(fivol_function_dim(f.f), r_nodes);
            ReportHandle rep;
            if (c_sv->parsed())
                check(fivol_steiner_verify(f.f, d.d, nodes.data(), (int)nodes.size(), &rep.r));
            else if (quadratic)
                check(fivol_dual_steiner_quadratic_verify(f.f, d.d, nodes.data(),
                                                          (int)nodes.size(), &rep.r));
            else
                check(fivol_dual_steiner_verify(f.f, d.d, nodes.data(), (int)nodes.size(),
                                                &rep.r));
            write_output(out_path, report_csv(rep.r));
            if (!svg_path.empty()) write_svg(svg_path, rep.r);
            return check_report_tolerance(rep.r, tol);
        }

        if (c_tr->parsed()) {
            DensityHandle d;
            load_density(density_path, d);
            DensityHandle out;
            if (op == "R")
                check(fivol_transform_R(d.d, l, &out.d));
            else if (op == "Rinv")
                check(fivol_transform_R_inv(d.d, l, &out.d));
            else if (op == "steiner")
                check(fivol_steiner_density(d.d, n, j, &out.d));
            else
                fail(2, "unknown transform op: " + op);
            char* text = nullptr;
            check(fivol_density_to_json(out.d, &text));
            std::string s = text;
            fivol_string_free(text);
            write_output(out_path, s + "\n");
            return 0;
        }

        if (c_rc->parsed()) {
            DensityHandle d;
            load_density(density_path, d);
            std::string body = read_file(body_path);
            int dim = 0;
            double vols[16];
            check(fivol_classical_volumes(body.c_str(), vols, 16, &dim));
            auto nodes = resolve_nodes(dim, r_nodes);
            ReportHandle rep;
            check(fivol_retrieve_classical(body.c_str(), d.d, nodes.data(), (int)nodes.size(),
                                           &rep.r));
            std::ostringstream csv;
            csv << csv_header() << "j,recovered_vj,classical_vj,rel_error\n";
            int status = check_report_tolerance(rep.r, tol);
            for (int jj = 0; jj <= dim; ++jj) {
                double rec = report_get(rep.r, "recovered_vj", jj);
                double cls = vols[jj];
                double err = std::fabs(rec - cls) / std::max(std::fabs(cls), 1e-12);
                if (err > tol) status = 1;
                csv << jj << "," << fmt(rec) << "," << fmt(cls) << "," << fmt(err) << "\n";
            }
            write_output(out_path, csv.str());
            return status;
        }

        if (c_mi->parsed()) {
            DensityHandle d;
            load_density(density_path, d);
            FunctionHandle f;
            load_function(fn_path, f);
            double value = 0.0;
            if (kind == "ma")
                check(fivol_ma_integral(f.f, d.d, &value));
            else if (kind == "conj")
                check(fivol_conj_ma_integral(f.f, d.d, &value));
            else if (kind == "theta")
                check(fivol_theta_j_integral(f.f, j, d.d, &value));
            else if (kind == "theta-star")
                check(fivol_theta_star_j_integral(f.f, j, d.d, &value));
            else
                fail(2, "unknown measure-integral kind: " + kind);
            std::ostringstream csv;
            csv << csv_header() << "kind,j,value\n"
                << kind << "," << j << "," << fmt(value) << "\n";
            write_output(out_path, csv.str());
            return 0;
        }

        if (c_ps->parsed()) {
            DensityHandle a;
            load_density(density_path, a);
            std::string phi_json = phi_preset_json(phi_arg);
            if (phi_json.empty()) phi_json = read_file(phi_arg);
            double S = 0.0;
            for (double s = 16.0; s > 1e-6; s *= 0.5)
                if (fivol_density_eval(a.d, s) != 0.0) { S = 2.0 * s; break; }
            if (S == 0.0) S = 1.0;
            std::vector<double> ts(samples), vals(samples);
            for (int i = 0; i < samples; ++i) ts[i] = S * (i + 0.5) / samples;
            double verr = 0.0;
            check(fivol_phi_beta_solve(a.d, phi_json.c_str(), j, n, ts.data(), vals.data(),
                                       samples, &verr));
            std::ostringstream csv;
            csv << csv_header() << "t,beta\n";
            for (int i = 0; i < samples; ++i) csv << fmt(ts[i]) << "," << fmt(vals[i]) << "\n";
            csv << "max_validation_error," << fmt(verr) << "\n";
            write_output(out_path, csv.str());
            return 0;
        }
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.status;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 2;
}
