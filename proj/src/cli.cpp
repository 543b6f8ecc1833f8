// SPDX-License-Identifier: Apache-2.0
//
// Subcommand handlers for the command line front end: JSON problem files in,
// JSON reports and plot-ready CSV out. See cli.hpp for the exit-code contract.

#include "qpencil/cli.hpp"

#include "qpencil/bvp.hpp"
#include "qpencil/io.hpp"
#include "qpencil/matrix_functions.hpp"
#include "qpencil/operator_core.hpp"
#include "qpencil/pde_example.hpp"
#include "qpencil/pencil.hpp"
#include "qpencil/quadrature.hpp"
#include "qpencil/semigroup.hpp"
#include "qpencil/types.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace {

using nlohmann::json;
using namespace qpencil;

struct CommonOpts {
    std::string input;
    std::string out;     // CSV path
    std::string report;  // JSON report path; stdout when empty
    std::uint64_t seed{0};
    double tol{0.0};  // 0 -> per-command default
    std::string convention{"auto"};
    int samples{0};  // 0 -> per-command default
    int grid{0};     // 0 -> per-command default
};

void add_common_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--input,--config", o.input, "input JSON file")->required();
    cmd->add_option("--out", o.out, "CSV output path");
    cmd->add_option("--report", o.report, "JSON report path (stdout when omitted)");
    cmd->add_option("--seed", o.seed, "RNG seed for sampled checks (default 0)");
    cmd->add_option("--tol", o.tol, "tolerance override");
    cmd->add_option("--convention", o.convention, "root convention: real|rotated|auto")
        ->check(CLI::IsMember({"real", "rotated", "auto"}));
    cmd->add_option("--samples", o.samples, "sample count override");
    cmd->add_option("--grid", o.grid, "grid size override");
}

void emit_report(const CommonOpts& o, const json& report) {
    const std::string text = io::dump_report(report);
    if (o.report.empty()) {
        std::cout << text;
    } else {
        io::write_text_file(o.report, text);
    }
}

void write_csv_file(const std::string& path, const std::string& content) {
    io::write_text_file(path, content);
}

std::pair<Factorization, std::string> factorize_with_choice(const PencilSpec& p,
                                                            const std::string& convention) {
    if (convention == "real") {
        return {factorize(p, Convention::real_root), "real_root"};
    }
    if (convention == "rotated") {
        return {factorize(p, Convention::rotated_root), "rotated_root"};
    }
    try {
        return {factorize(p, Convention::real_root), "real_root"};
    } catch (const NegativeRealEigenvalue&) {
        return {factorize(p, Convention::rotated_root), "rotated_root"};
    }
}

PencilSpec pencil_from_input(const json& j, const char* who) {
    if (j.contains("pencil")) {
        return io::pencil_from_json(j.at("pencil"), who);
    }
    return io::pencil_from_json(j, who);
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

int run_check(const CommonOpts& o) {
    const json input = io::load_json_file(o.input);

    std::optional<PencilSpec> pencil;
    std::optional<Matrix> op;
    if (input.contains("pencil")) {
        pencil = io::pencil_from_json(input.at("pencil"), "check");
    } else if (input.contains("B") && input.contains("C")) {
        pencil = io::pencil_from_json(input, "check");
    }
    if (input.contains("operator")) {
        op = io::operator_from_json(input.at("operator"), "check");
    }
    if (!pencil.has_value() && !op.has_value()) {
        throw SchemaError("check: input needs a \"pencil\" (or B/C) or an \"operator\"");
    }

    const auto resolve_target = [&](const std::string& name) -> Matrix {
        if (pencil.has_value()) {
            if (name == "B") return pencil->b;
            if (name == "C") return pencil->c;
            if (name == "B2" || name == "B_squared") return pencil->b * pencil->b;
        }
        if (op.has_value()) {
            if (name == "operator" || name == "B") return *op;
            if (name == "operator_squared" || name == "B2" || name == "B_squared") {
                return (*op) * (*op);
            }
        }
        throw SchemaError("check: unknown target \"" + name + "\" for this input");
    };

    const json& checks = input.contains("checks") ? input.at("checks") : json::array();
    if (!checks.is_array()) {
        throw SchemaError("check: \"checks\" must be an array");
    }

    json results = json::array();
    bool all_as_expected = true;
    for (const json& item : checks) {
        if (!item.is_object() || !item.contains("kind") || !item.at("kind").is_string()) {
            throw SchemaError("check: each check needs a string \"kind\"");
        }
        const std::string kind = item.at("kind").get<std::string>();
        const bool expect_pass = item.value("expect_pass", true);
        ConditionReport rep;
        rep.seed = o.seed;

        if (kind == "sector") {
            const std::string target = item.value("target", pencil ? "B" : "operator");
            const Matrix a = resolve_target(target);
            Sector s;
            s.half_angle = item.contains("half_angle")
                               ? item.at("half_angle").get<double>()
                               : kPi / 4;
            if (item.contains("vertex")) {
                s.vertex = io::complex_from_json(item.at("vertex"), "check");
            }
            const SectorReport sr = sector_test(a, s);
            rep.condition = "sector(" + target + ")";
            rep.pass = sr.pass;
            rep.margin = sr.margin;
            rep.mode = "exact";
            rep.parameters["half_angle"] = s.half_angle;
            rep.parameters["vertex_re"] = s.vertex.real();
            rep.parameters["vertex_im"] = s.vertex.imag();
        } else if (kind == "accretive") {
            const std::string target = item.value("target", pencil ? "B" : "operator");
            const Matrix a = resolve_target(target);
            const double margin = accretivity_margin(a);
            rep.condition = "accretive(" + target + ")";
            rep.margin = margin;
            rep.pass = margin >= -1e-10 * std::max(1.0, a.norm());
            rep.mode = "exact";
        } else if (kind == "condition") {
            if (!pencil.has_value()) {
                throw SchemaError("check: condition checks need a pencil input");
            }
            const std::string which = item.value("condition", "");
            if (which == "C1") {
                ConditionC1Params params;
                params.alpha = item.value("alpha", 0.0);
                params.beta = item.value("beta", 0.0);
                params.delta = item.value("delta", 0.0);
                const int samples = o.samples > 0 ? o.samples : 100000;
                rep = check_c1(*pencil, params, samples, o.seed);
            } else if (which == "C2") {
                if (item.contains("a") && item.contains("b")) {
                    ConditionC2Params params;
                    params.a = item.at("a").get<double>();
                    params.b = item.at("b").get<double>();
                    rep = check_c2_exact(*pencil, params);
                } else {
                    rep = estimate_c2(*pencil).report;
                }
            } else if (which == "C3") {
                if (!item.contains("t0")) {
                    throw SchemaError("check: condition C3 needs \"t0\"");
                }
                rep = check_c3(*pencil, item.at("t0").get<double>());
            } else if (which == "C4C5") {
                rep = check_c4_c5(*pencil);
            } else if (which == "Lambda") {
                rep = build_lambda(*pencil).second;
            } else {
                throw SchemaError("check: unknown condition \"" + which + "\"");
            }
            rep.seed = o.seed;
        } else {
            throw SchemaError("check: unknown check kind \"" + kind + "\"");
        }

        const bool as_expected = (rep.pass == expect_pass);
        all_as_expected = all_as_expected && as_expected;
        json rj = io::condition_report_to_json(rep);
        rj["expect_pass"] = expect_pass;
        rj["as_expected"] = as_expected;
        results.push_back(std::move(rj));
    }

    const json report{{"command", "check"},
                      {"seed", o.seed},
                      {"checks", std::move(results)},
                      {"all_as_expected", all_as_expected}};
    emit_report(o, report);
    return all_as_expected ? 0 : 1;
}

// ---------------------------------------------------------------------------
// factorize
// ---------------------------------------------------------------------------

int run_factorize(const CommonOpts& o) {
    const json input = io::load_json_file(o.input);
    const PencilSpec p = pencil_from_input(input, "factorize");

    const auto [lambda, lambda_report] = build_lambda(p);
    auto [fact, convention_used] = factorize_with_choice(p, o.convention);

    const Complex probe(0.0, 0.0);
    const double ordered = ordered_residual(fact, p, probe);
    const double symmetrized = symmetrized_residual(fact, p, probe);
    const double trace_residual = op_norm(Matrix(fact.z1 + fact.z2 - 2.0 * p.b));
    const double scale =
        std::max(1.0, std::norm(probe) + op_norm(p.b) * op_norm(p.b) + op_norm(p.c));
    const double tol = o.tol > 0.0 ? o.tol : 1e-10;
    const bool pass = symmetrized <= tol * scale && trace_residual <= tol * scale;

    if (!o.out.empty()) {
        const json factors{{"Z1", io::operator_to_json(fact.z1)},
                           {"Z2", io::operator_to_json(fact.z2)},
                           {"S", io::operator_to_json(fact.s)},
                           {"Lambda", io::operator_to_json(fact.lambda)}};
        io::write_text_file(o.out, io::dump_report(factors));
    }

    const json report{{"command", "factorize"},
                      {"seed", o.seed},
                      {"convention", convention_used},
                      {"lambda_report", io::condition_report_to_json(lambda_report)},
                      {"commutator_norm", fact.commutator_norm},
                      {"lambda_margin", fact.lambda_margin},
                      {"defective", fact.defective},
                      {"ordered_residual", ordered},
                      {"symmetrized_residual", symmetrized},
                      {"trace_identity_residual", trace_residual},
                      {"scale", scale},
                      {"pass", pass}};
    emit_report(o, report);
    return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// numrange
// ---------------------------------------------------------------------------

int run_numrange(const CommonOpts& o) {
    const json input = io::load_json_file(o.input);
    Matrix a;
    if (input.contains("operator")) {
        a = io::operator_from_json(input.at("operator"), "numrange");
    } else {
        a = io::operator_from_json(input, "numrange");
    }
    const int m = o.samples > 0 ? o.samples : 720;
    const NumericalRangeSample sample = numerical_range(a, m);

    if (!o.out.empty()) {
        std::ostringstream csv;
        io::write_numrange_csv(csv, sample);
        write_csv_file(o.out, csv.str());
    }

    const double margin = accretivity_margin(a);
    const SectorReport quarter = sector_test(a, Sector{Complex(0.0, 0.0), kPi / 4});
    const json report{{"command", "numrange"},
                      {"seed", o.seed},
                      {"m", m},
                      {"accretivity_margin", margin},
                      {"sector_quarter", io::sector_report_to_json(quarter)},
                      {"pass", true}};
    emit_report(o, report);
    return 0;
}

// ---------------------------------------------------------------------------
// semigroup
// ---------------------------------------------------------------------------

int run_semigroup(const CommonOpts& o) {
    const json input = io::load_json_file(o.input);
    Matrix a;
    if (input.contains("operator")) {
        a = io::operator_from_json(input.at("operator"), "semigroup");
    } else {
        a = io::operator_from_json(input, "semigroup");
    }
    std::vector<double> t_samples = default_t_samples();
    if (input.contains("t_samples")) {
        t_samples.clear();
        for (const json& t : input.at("t_samples")) {
            if (!t.is_number()) throw SchemaError("semigroup: t_samples must be numbers");
            t_samples.push_back(t.get<double>());
        }
    }

    const double tol = o.tol > 0.0 ? o.tol : 1e-12;
    const double worst = contraction_check(a, t_samples);
    const bool contraction_pass = worst <= 1.0 + tol;
    bool all_pass = contraction_pass;

    json report{{"command", "semigroup"},
                {"seed", o.seed},
                {"contraction_norm", worst},
                {"contraction_pass", contraction_pass},
                {"t_samples", t_samples}};

    if (input.contains("psi")) {
        const ConditionReport hol = holomorphic_sector_check(a, input.at("psi").get<double>());
        report["holomorphic_sector"] = io::condition_report_to_json(hol);
        all_pass = all_pass && hol.pass;
    }
    if (input.contains("omega")) {
        const ConditionReport quasi = quasi_sectorial_check(a, input.at("omega").get<double>());
        report["quasi_sectorial"] = io::condition_report_to_json(quasi);
        all_pass = all_pass && quasi.pass;
    }
    report["pass"] = all_pass;
    emit_report(o, report);
    return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

int run_solve(const CommonOpts& o) {
    const json input = io::load_json_file(o.input);
    const BvpProblem prob = io::bvp_problem_from_json(input, "solve");
    auto [fact, convention_used] = factorize_with_choice(prob.pencil, o.convention);

    const BvpSolution sol = solve_bvp(prob, fact);

    if (!o.out.empty()) {
        std::ostringstream csv;
        io::write_solution_csv(csv, sol);
        write_csv_file(o.out, csv.str());
    }

    const double tol = o.tol > 0.0 ? o.tol : 1e-6;
    double fmax = 0.0;
    for (const Vector& v : prob.f.values) fmax = std::max(fmax, v.norm());
    const double scale = 1.0 + std::max(prob.u0.norm(), prob.u1.norm()) + fmax;
    const bool pass = sol.residual_bc[0] <= tol * scale && sol.residual_bc[1] <= tol * scale;

    json report{{"command", "solve"},
                {"seed", o.seed},
                {"convention", convention_used},
                {"commutator_norm", fact.commutator_norm},
                {"solution", io::bvp_solution_to_json(sol)},
                {"tolerance", tol},
                {"pass", pass}};

    if (o.grid >= 3) {
        const BvpSolution direct = direct_solve(prob, o.grid);
        // Compare at shared nodes only when grids coincide.
        json cmp{{"n_x", o.grid}, {"residual_ode", direct.residual_ode}};
        if (direct.x.size() == sol.x.size()) {
            double disc = 0.0;
            for (std::size_t i = 0; i < sol.u.size(); ++i) {
                disc = std::max(disc, (sol.u[i] - direct.u[i]).lpNorm<Eigen::Infinity>());
            }
            cmp["max_discrepancy"] = disc;
        }
        report["direct_comparison"] = std::move(cmp);
    }

    emit_report(o, report);
    return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// pde-example
// ---------------------------------------------------------------------------

int run_pde_example(const CommonOpts& o) {
    const json input = io::load_json_file(o.input);
    const json& coeff_json = input.contains("coefficients") ? input.at("coefficients") : input;
    const PdeCoefficients coeffs = io::coefficients_from_json(coeff_json, "pde-example");

    int n_x = 32;
    if (input.contains("n_x")) n_x = input.at("n_x").get<int>();
    if (o.grid > 0) n_x = o.grid;

    BranchChoice choice = BranchChoice::automatic;
    if (o.convention == "real") choice = BranchChoice::real_root;
    if (o.convention == "rotated") choice = BranchChoice::rotated_root;

    ForcingSamples f;
    Vector u0, u1;
    std::vector<Vector> exact;
    bool manufactured = false;
    if (input.contains("u0") && input.contains("u1") && input.contains("f")) {
        u0 = io::vector_from_json(input.at("u0"), "pde-example");
        u1 = io::vector_from_json(input.at("u1"), "pde-example");
        const json& fj = input.at("f");
        if (!fj.is_object() || !fj.contains("x") || !fj.contains("values")) {
            throw SchemaError("pde-example: \"f\" must hold \"x\" and \"values\"");
        }
        for (const json& t : fj.at("x")) f.x.push_back(t.get<double>());
        for (const json& v : fj.at("values")) {
            f.values.push_back(io::vector_from_json(v, "pde-example"));
        }
    } else {
        const ManufacturedPde m = manufactured_solution(coeffs, n_x);
        f = m.f;
        u0 = m.u0;
        u1 = m.u1;
        exact = m.exact;
        manufactured = true;
    }

    const PdeSolveReport rep = solve_example(coeffs, f, u0, u1, n_x, choice);

    if (!o.out.empty()) {
        std::ostringstream csv;
        io::write_solution_2d_csv(csv, rep.formula, interior_grid(coeffs.n_y));
        write_csv_file(o.out, csv.str());
    }

    json claims = json::array();
    for (const ClaimReport& cr : rep.claims) claims.push_back(io::claim_to_json(cr));

    json report{{"command", "pde-example"},
                {"seed", o.seed},
                {"n_x", rep.n_x},
                {"n_y", rep.n_y},
                {"bounds",
                 json{{"m0", rep.bounds.m0},
                      {"M1", rep.bounds.m1},
                      {"M2", rep.bounds.m2},
                      {"gamma", rep.bounds.gamma},
                      {"epsilon", rep.bounds.epsilon_used}}},
                {"claims", std::move(claims)},
                {"claims_pass", rep.claims_pass},
                {"adjudication", io::adjudication_to_json(rep.adjudication)},
                {"selected_convention", rep.selected_convention},
                {"solve",
                 json{{"max_discrepancy", rep.max_discrepancy},
                      {"fine_discrepancy", rep.fine_discrepancy},
                      {"convergence_order", rep.convergence_order},
                      {"residual_bc", json::array({rep.formula.residual_bc[0],
                                                   rep.formula.residual_bc[1]})},
                      {"sixth_term", rep.formula.sixth_term}}}};

    if (manufactured) {
        double err_formula = 0.0;
        double err_direct = 0.0;
        for (std::size_t i = 0; i < exact.size(); ++i) {
            err_formula = std::max(
                err_formula, (rep.formula.u[i] - exact[i]).lpNorm<Eigen::Infinity>());
            err_direct = std::max(err_direct,
                                  (rep.direct.u[i] - exact[i]).lpNorm<Eigen::Infinity>());
        }
        report["manufactured_error"] =
            json{{"formula_max", err_formula}, {"direct_max", err_direct}};
    }

    emit_report(o, report);
    return rep.claims_pass ? 0 : 1;
}

}  // namespace

namespace qpencil::cli {

int run(int argc, const char* const* argv) {
    CLI::App app{"quadratic operator pencil toolkit: factorization, condition checks, "
                 "semigroup verification, and boundary value solves"};
    app.require_subcommand(1);

    CommonOpts check_o, factorize_o, numrange_o, semigroup_o, solve_o, pde_o;
    CLI::App* cmd_check = app.add_subcommand("check", "run condition/sector checks from a file");
    add_common_flags(cmd_check, check_o);
    CLI::App* cmd_factorize = app.add_subcommand("factorize", "factorize a pencil into Z1, Z2");
    add_common_flags(cmd_factorize, factorize_o);
    CLI::App* cmd_numrange =
        app.add_subcommand("numrange", "sample the numerical range boundary");
    add_common_flags(cmd_numrange, numrange_o);
    CLI::App* cmd_semigroup =
        app.add_subcommand("semigroup", "contraction / sector semigroup checks");
    add_common_flags(cmd_semigroup, semigroup_o);
    CLI::App* cmd_solve = app.add_subcommand("solve", "solve the two-point boundary problem");
    add_common_flags(cmd_solve, solve_o);
    CLI::App* cmd_pde =
        app.add_subcommand("pde-example", "discretized transport example end to end");
    add_common_flags(cmd_pde, pde_o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_check->parsed()) return run_check(check_o);
        if (cmd_factorize->parsed()) return run_factorize(factorize_o);
        if (cmd_numrange->parsed()) return run_numrange(numrange_o);
        if (cmd_semigroup->parsed()) return run_semigroup(semigroup_o);
        if (cmd_solve->parsed()) return run_solve(solve_o);
        if (cmd_pde->parsed()) return run_pde_example(pde_o);
    } catch (const SchemaError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace qpencil::cli
