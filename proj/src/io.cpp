// SPDX-License-Identifier: Apache-2.0
#include "qpencil/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

namespace qpencil::io {

namespace {

std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

[[noreturn]] void schema_fail(const char* who, const std::string& what) {
    throw SchemaError(std::string(who) + ": " + what);
}

const json& require_key(const json& j, const char* key, const char* who) {
    if (!j.is_object() || !j.contains(key)) {
        schema_fail(who, std::string("missing key \"") + key + "\"");
    }
    return j.at(key);
}

double number_at(const json& j, const char* key, const char* who) {
    const json& v = require_key(j, key, who);
    if (!v.is_number()) {
        schema_fail(who, std::string("key \"") + key + "\" must be a number");
    }
    return v.get<double>();
}

std::vector<double> real_array(const json& j, const char* who, const char* what) {
    if (!j.is_array()) {
        schema_fail(who, std::string(what) + " must be an array");
    }
    std::vector<double> out;
    out.reserve(j.size());
    for (const json& v : j) {
        if (!v.is_number()) {
            schema_fail(who, std::string(what) + " must contain only numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw SchemaError("cannot open input file: " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError("parse error in " + path + ": " + e.what());
    }
}

std::string dump_report(const json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot open output file: " + path);
    }
    out << content;
    if (!out) {
        throw Error("failed writing output file: " + path);
    }
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j, const char* who) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        schema_fail(who, "complex values must be [re, im] number pairs");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

json vector_to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(complex_to_json(v(i)));
    }
    return out;
}

Vector vector_from_json(const json& j, const char* who) {
    if (!j.is_array()) {
        schema_fail(who, "vector must be an array of [re, im] pairs");
    }
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], who);
    }
    return v;
}

json operator_to_json(const Matrix& a) {
    json entries = json::array();
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            row.push_back(complex_to_json(a(r, c)));
        }
        entries.push_back(std::move(row));
    }
    return json{{"dim", a.rows()}, {"entries", std::move(entries)}};
}

Matrix operator_from_json(const json& j, const char* who) {
    const json& dim_j = require_key(j, "dim", who);
    if (!dim_j.is_number_integer() || dim_j.get<long long>() < 1) {
        schema_fail(who, "\"dim\" must be a positive integer");
    }
    const Eigen::Index n = dim_j.get<Eigen::Index>();
    const json& entries = require_key(j, "entries", who);
    if (!entries.is_array() || entries.size() != static_cast<std::size_t>(n)) {
        schema_fail(who, "\"entries\" must hold dim rows");
    }
    Matrix a(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const json& row = entries[static_cast<std::size_t>(r)];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(n)) {
            schema_fail(who, "each row of \"entries\" must hold dim [re, im] pairs");
        }
        for (Eigen::Index c = 0; c < n; ++c) {
            a(r, c) = complex_from_json(row[static_cast<std::size_t>(c)], who);
        }
    }
    if (!a.allFinite()) {
        schema_fail(who, "operator entries must be finite");
    }
    return a;
}

json pencil_to_json(const PencilSpec& p) {
    return json{{"B", operator_to_json(p.b)}, {"C", operator_to_json(p.c)}};
}

PencilSpec pencil_from_json(const json& j, const char* who) {
    PencilSpec p;
    p.b = operator_from_json(require_key(j, "B", who), who);
    p.c = operator_from_json(require_key(j, "C", who), who);
    validate(p, who);
    return p;
}

json rule_to_json(const QuadratureRule& r) {
    return json{{"nodes", r.nodes},
                {"weights", r.weights},
                {"domain", r.domain},
                {"declared_degree", r.declared_degree}};
}

QuadratureRule rule_from_json(const json& j, const char* who) {
    QuadratureRule r;
    r.nodes = real_array(require_key(j, "nodes", who), who, "\"nodes\"");
    r.weights = real_array(require_key(j, "weights", who), who, "\"weights\"");
    if (r.nodes.size() != r.weights.size()) {
        schema_fail(who, "\"nodes\" and \"weights\" must have equal length");
    }
    if (j.contains("domain")) {
        if (!j.at("domain").is_string()) schema_fail(who, "\"domain\" must be a string");
        r.domain = j.at("domain").get<std::string>();
    }
    if (j.contains("declared_degree")) {
        if (!j.at("declared_degree").is_number_integer()) {
            schema_fail(who, "\"declared_degree\" must be an integer");
        }
        r.declared_degree = j.at("declared_degree").get<int>();
    }
    return r;
}

json condition_report_to_json(const ConditionReport& r) {
    json params = json::object();
    for (const auto& [k, v] : r.parameters) params[k] = v;
    return json{{"condition", r.condition}, {"pass", r.pass},
                {"margin", r.margin},       {"mode", r.mode},
                {"samples", r.samples},     {"seed", r.seed},
                {"parameters", params},     {"notes", r.notes}};
}

json bvp_problem_to_json(const BvpProblem& prob) {
    json fvals = json::array();
    for (const Vector& v : prob.f.values) fvals.push_back(vector_to_json(v));
    return json{{"pencil", pencil_to_json(prob.pencil)},
                {"u0", vector_to_json(prob.u0)},
                {"u1", vector_to_json(prob.u1)},
                {"f", json{{"x", prob.f.x}, {"values", std::move(fvals)}}},
                {"x_grid", prob.x_grid},
                {"p", prob.p_exponent}};
}

BvpProblem bvp_problem_from_json(const json& j, const char* who) {
    BvpProblem prob;
    prob.pencil = pencil_from_json(require_key(j, "pencil", who), who);
    prob.u0 = vector_from_json(require_key(j, "u0", who), who);
    prob.u1 = vector_from_json(require_key(j, "u1", who), who);
    const json& f = require_key(j, "f", who);
    prob.f.x = real_array(require_key(f, "x", who), who, "\"f.x\"");
    const json& values = require_key(f, "values", who);
    if (!values.is_array()) {
        schema_fail(who, "\"f.values\" must be an array of vectors");
    }
    for (const json& v : values) {
        prob.f.values.push_back(vector_from_json(v, who));
    }
    prob.x_grid = real_array(require_key(j, "x_grid", who), who, "\"x_grid\"");
    if (j.contains("p")) {
        if (!j.at("p").is_number()) schema_fail(who, "\"p\" must be a number");
        prob.p_exponent = j.at("p").get<double>();
    }
    validate(prob, who);
    return prob;
}

namespace {

json compatibility_to_json(const CompatibilityNorms& c) {
    return json{{"computed", c.computed}, {"sup_u0", c.sup_u0}, {"sup_u1", c.sup_u1},
                {"lp_u0", c.lp_u0},       {"lp_u1", c.lp_u1},   {"p", c.p}};
}

}  // namespace

json bvp_solution_to_json(const BvpSolution& sol) {
    json u = json::array();
    for (const Vector& v : sol.u) u.push_back(vector_to_json(v));
    return json{{"x", sol.x},
                {"u", std::move(u)},
                {"residual_ode", sol.residual_ode},
                {"residual_bc", json::array({sol.residual_bc[0], sol.residual_bc[1]})},
                {"compatibility", compatibility_to_json(sol.compatibility)},
                {"convention", sol.convention},
                {"sixth_term", sol.sixth_term},
                {"adjudication",
                 json{{"bc_corrected", sol.adjudication_bc_corrected},
                      {"bc_as_printed", sol.adjudication_bc_as_printed}}}};
}

namespace {

json coefficient_to_json(const CoefficientFunction& fn) {
    if (fn.is_poly) {
        return json{{"type", "poly"}, {"coeffs", fn.coeffs}};
    }
    return json{{"type", "samples"}, {"x", fn.x}, {"values", fn.values}};
}

CoefficientFunction coefficient_from_json(const json& j, const char* who) {
    const json& type = require_key(j, "type", who);
    if (!type.is_string()) schema_fail(who, "coefficient \"type\" must be a string");
    const std::string kind = type.get<std::string>();
    if (kind == "poly") {
        return poly_coefficient(real_array(require_key(j, "coeffs", who), who, "\"coeffs\""));
    }
    if (kind == "samples") {
        return sampled_coefficient(real_array(require_key(j, "x", who), who, "\"x\""),
                                   real_array(require_key(j, "values", who), who, "\"values\""));
    }
    schema_fail(who, "coefficient \"type\" must be \"poly\" or \"samples\"");
}

}  // namespace

json coefficients_to_json(const PdeCoefficients& c) {
    return json{{"p0", coefficient_to_json(c.p0)},
                {"p1", coefficient_to_json(c.p1)},
                {"alpha", c.alpha},
                {"beta", complex_to_json(c.beta)},
                {"r", c.r},
                {"epsilon", c.epsilon},
                {"n_y", c.n_y}};
}

PdeCoefficients coefficients_from_json(const json& j, const char* who) {
    PdeCoefficients c;
    c.p0 = coefficient_from_json(require_key(j, "p0", who), who);
    c.p1 = coefficient_from_json(require_key(j, "p1", who), who);
    c.alpha = number_at(j, "alpha", who);
    c.beta = complex_from_json(require_key(j, "beta", who), who);
    c.r = number_at(j, "r", who);
    c.epsilon = number_at(j, "epsilon", who);
    const json& n_y = require_key(j, "n_y", who);
    if (!n_y.is_number_integer()) schema_fail(who, "\"n_y\" must be an integer");
    c.n_y = n_y.get<int>();
    validate(c, who);
    return c;
}

json claim_to_json(const ClaimReport& cr) {
    return json{{"claim", cr.claim},
                {"pass", cr.pass},
                {"margin", cr.margin},
                {"grid", cr.grid},
                {"notes", cr.notes}};
}

json adjudication_to_json(const PencilAdjudication& adj) {
    json branches = json::array();
    for (const BranchResidual& br : adj.branches) {
        branches.push_back(json{{"name", br.name},
                                {"factorized", br.factorized},
                                {"ordered_residual", br.ordered_residual},
                                {"note", br.note}});
    }
    return json{{"dim", adj.pencil.b.rows()},
                {"gamma", adj.gamma},
                {"scale", adj.scale},
                {"branches", std::move(branches)},
                {"factoring_branch", adj.factoring_branch},
                {"unique", adj.unique}};
}

json sector_report_to_json(const SectorReport& rep) {
    return json{{"pass", rep.pass},
                {"margin", rep.margin},
                {"margin_plus", rep.margin_plus},
                {"margin_minus", rep.margin_minus},
                {"vertex", complex_to_json(rep.sector.vertex)},
                {"half_angle", rep.sector.half_angle}};
}

void write_solution_csv(std::ostream& os, const BvpSolution& sol) {
    os << "x,component_index,re_u,im_u\n";
    for (std::size_t i = 0; i < sol.x.size(); ++i) {
        const Vector& u = sol.u[i];
        for (Eigen::Index k = 0; k < u.size(); ++k) {
            os << fmt_double(sol.x[i]) << ',' << k << ',' << fmt_double(u(k).real()) << ','
               << fmt_double(u(k).imag()) << '\n';
        }
    }
}

void write_solution_2d_csv(std::ostream& os, const BvpSolution& sol,
                           const std::vector<double>& y_interior) {
    os << "x,y,re_u,im_u\n";
    for (std::size_t i = 0; i < sol.x.size(); ++i) {
        const Vector& u = sol.u[i];
        if (u.size() != static_cast<Eigen::Index>(y_interior.size())) {
            throw ShapeMismatch("write_solution_2d_csv: y grid does not match solution blocks");
        }
        const std::string xs = fmt_double(sol.x[i]);
        os << xs << ",0,0,0\n";
        for (Eigen::Index k = 0; k < u.size(); ++k) {
            os << xs << ',' << fmt_double(y_interior[static_cast<std::size_t>(k)]) << ','
               << fmt_double(u(k).real()) << ',' << fmt_double(u(k).imag()) << '\n';
        }
        os << xs << ",1,0,0\n";
    }
}

void write_numrange_csv(std::ostream& os, const NumericalRangeSample& sample) {
    os << "theta,support_value,boundary_re,boundary_im\n";
    for (std::size_t i = 0; i < sample.angles.size(); ++i) {
        os << fmt_double(sample.angles[i]) << ',' << fmt_double(sample.support_values[i]) << ','
           << fmt_double(sample.boundary_points[i].real()) << ','
           << fmt_double(sample.boundary_points[i].imag()) << '\n';
    }
}

void validate_report_json(const json& j, const std::string& kind) {
    const auto need = [&](const char* key, bool (*pred)(const json&)) {
        if (!j.is_object() || !j.contains(key) || !pred(j.at(key))) {
            throw SchemaError("report does not match the \"" + kind + "\" schema at key \"" +
                              key + "\"");
        }
    };
    const auto is_string = [](const json& v) { return v.is_string(); };
    const auto is_bool = [](const json& v) { return v.is_boolean(); };
    const auto is_number_or_null = [](const json& v) { return v.is_number() || v.is_null(); };
    const auto is_int = [](const json& v) { return v.is_number_integer(); };
    const auto is_array = [](const json& v) { return v.is_array(); };
    const auto is_object = [](const json& v) { return v.is_object(); };

    if (kind == "condition_report") {
        need("condition", is_string);
        need("pass", is_bool);
        need("margin", is_number_or_null);
        need("mode", is_string);
        need("samples", is_int);
        need("seed", is_int);
        return;
    }
    if (kind == "bvp_solution") {
        need("x", is_array);
        need("u", is_array);
        need("residual_bc",
             [](const json& v) { return v.is_array() && v.size() == 2; });
        need("compatibility", is_object);
        need("convention", is_string);
        need("sixth_term", is_string);
        return;
    }
    if (kind == "claim") {
        need("claim", is_int);
        need("pass", is_bool);
        need("margin", is_number_or_null);
        need("grid", is_int);
        need("notes", is_string);
        return;
    }
    if (kind == "operator") {
        need("dim", is_int);
        need("entries", is_array);
        return;
    }
    if (kind == "quadrature_rule") {
        need("nodes", is_array);
        if (!(j.contains("weights") && j.at("weights").is_array() &&
              j.at("weights").size() == j.at("nodes").size())) {
            throw SchemaError("report does not match the \"" + kind +
                              "\" schema at key \"weights\"");
        }
        return;
    }
    throw SchemaError("unknown report schema kind: " + kind);
}

}  // namespace qpencil::io
