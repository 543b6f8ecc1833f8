// SPDX-License-Identifier: Apache-2.0
//
// Python bindings for the qpencil core: pencil factorization, sector and
// accretivity certificates, matrix functions, the boundary-value solver, and
// the transport model example.

#include "qpencil/bvp.hpp"
#include "qpencil/matrix_functions.hpp"
#include "qpencil/operator_core.hpp"
#include "qpencil/pde_example.hpp"
#include "qpencil/pencil.hpp"
#include "qpencil/quadrature.hpp"
#include "qpencil/semigroup.hpp"
#include "qpencil/types.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

namespace py = pybind11;
using namespace qpencil;

namespace {

Factorization factorize_named(const Matrix& b, const Matrix& c, const std::string& convention) {
    PencilSpec p;
    p.b = b;
    p.c = c;
    if (convention == "auto") {
        try {
            return factorize(p, Convention::real_root);
        } catch (const NegativeRealEigenvalue&) {
            return factorize(p, Convention::rotated_root);
        }
    }
    return factorize(p, convention_from_string(convention));
}

py::dict sector_report_to_dict(const SectorReport& rep) {
    py::dict d;
    d["pass"] = rep.pass;
    d["margin"] = rep.margin;
    d["margin_plus"] = rep.margin_plus;
    d["margin_minus"] = rep.margin_minus;
    d["vertex"] = rep.sector.vertex;
    d["half_angle"] = rep.sector.half_angle;
    return d;
}

py::dict condition_report_to_dict(const ConditionReport& rep) {
    py::dict d;
    d["condition"] = rep.condition;
    d["pass"] = rep.pass;
    d["margin"] = rep.margin;
    d["mode"] = rep.mode;
    d["samples"] = rep.samples;
    d["seed"] = rep.seed;
    d["notes"] = rep.notes;
    py::dict params;
    for (const auto& [key, value] : rep.parameters) params[py::str(key)] = value;
    d["parameters"] = params;
    return d;
}

py::dict solution_to_dict(const BvpSolution& sol) {
    py::dict d;
    d["x"] = sol.x;
    d["u"] = sol.u;
    d["residual_ode"] = sol.residual_ode;
    d["residual_bc"] = py::make_tuple(sol.residual_bc[0], sol.residual_bc[1]);
    d["convention"] = sol.convention;
    d["sixth_term"] = sol.sixth_term;
    return d;
}

py::dict claim_to_dict(const ClaimReport& cr) {
    py::dict d;
    d["claim"] = cr.claim;
    d["pass"] = cr.pass;
    d["margin"] = cr.margin;
    d["grid"] = cr.grid;
    d["notes"] = cr.notes;
    return d;
}

BvpProblem make_problem(const Matrix& b, const Matrix& c, const Vector& u0, const Vector& u1,
                        const std::vector<double>& x_grid, const std::vector<double>& f_x,
                        const std::vector<Vector>& f_values) {
    BvpProblem prob;
    prob.pencil.b = b;
    prob.pencil.c = c;
    prob.u0 = u0;
    prob.u1 = u1;
    prob.x_grid = x_grid;
    if (f_x.empty()) {
        prob.f.x = {0.0, 1.0};
        prob.f.values = {Vector::Zero(b.rows()), Vector::Zero(b.rows())};
    } else {
        prob.f.x = f_x;
        prob.f.values = f_values;
    }
    return prob;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Quadratic operator pencils: factorization, sector certificates, and "
              "explicit semigroup solvers for u'' - 2Bu' - Cu = f";
    m.attr("__version__") = "0.1.0";

    // Exception mapping. Later registrations are matched first, so the most
    // specific classes are registered after the base.
    // register_exception both creates the Python type and installs the translator;
    // translators run newest-first, so the base goes first and specific types after,
    // ensuring a derived C++ exception reaches its own Python type, not the base.
    auto& exc_base = py::register_exception<Error>(m, "QpencilError");
    py::register_exception<ShapeMismatch>(m, "ShapeMismatchError", exc_base);
    py::register_exception<ConstraintViolated>(m, "ConstraintViolatedError", exc_base);
    py::register_exception<SchemaError>(m, "SchemaValidationError", exc_base);
    py::register_exception<NegativeRealEigenvalue>(m, "NegativeRealEigenvalueError", exc_base);
    py::register_exception<SingularSystem>(m, "SingularSystemError", exc_base);

    py::class_<Factorization>(m, "Factorization",
                              "Linear factorization of Q(lambda) = lambda^2 I - 2 lambda B - C")
        .def_readonly("lam", &Factorization::lambda, "Lambda = B^2 + C")
        .def_readonly("s", &Factorization::s)
        .def_readonly("z1", &Factorization::z1)
        .def_readonly("z2", &Factorization::z2)
        .def_readonly("commutator_norm", &Factorization::commutator_norm)
        .def_readonly("lambda_margin", &Factorization::lambda_margin)
        .def_readonly("defective", &Factorization::defective)
        .def_property_readonly(
            "convention", [](const Factorization& f) { return std::string(to_string(f.convention)); })
        .def("__repr__", [](const Factorization& f) {
            return "<Factorization " + std::string(to_string(f.convention)) + ", dim " +
                   std::to_string(f.z1.rows()) + ">";
        });

    // ------------------------------------------------------------- operators
    m.def("hermitian_split", &hermitian_split, py::arg("a"),
          "Returns (H, K) with H = (A + A*)/2 Hermitian and K = A - H skew");
    m.def("accretivity_margin", &accretivity_margin, py::arg("a"),
          "Smallest eigenvalue of the Hermitian part");
    m.def(
        "sector_test",
        [](const Matrix& a, double half_angle, Complex vertex) {
            return sector_report_to_dict(sector_test(a, Sector{vertex, half_angle}));
        },
        py::arg("a"), py::arg("half_angle"), py::arg("vertex") = Complex(0.0, 0.0),
        "Certifies W(A) inside the closed sector |arg(z - vertex)| <= half_angle");
    m.def(
        "numerical_range",
        [](const Matrix& a, int samples) {
            const NumericalRangeSample s = numerical_range(a, samples);
            py::dict d;
            d["angles"] = s.angles;
            d["support_values"] = s.support_values;
            d["boundary_points"] = s.boundary_points;
            return d;
        },
        py::arg("a"), py::arg("samples") = 720,
        "Support-function sample of the numerical range boundary");

    // ------------------------------------------------------ matrix functions
    m.def(
        "principal_sqrt", [](const Matrix& a) { return principal_sqrt(a); }, py::arg("a"),
        "Principal matrix square root (raises if an eigenvalue lies on (-inf, 0])");
    m.def("expm", &expm, py::arg("a"), "Matrix exponential");
    m.def(
        "fractional_power",
        [](const Matrix& t, double alpha) { return balakrishnan_power(t, alpha); },
        py::arg("t"), py::arg("alpha"),
        "T^alpha for accretive invertible T via the resolvent integral");

    // ---------------------------------------------------------------- pencil
    m.def("factorize", &factorize_named, py::arg("b"), py::arg("c"),
          py::arg("convention") = "real_root",
          "Factorizes lambda^2 I - 2 lambda B - C into (lambda - Z1)(lambda - Z2); "
          "convention is 'real_root', 'rotated_root', or 'auto'");
    m.def(
        "symmetrized_residual",
        [](const Factorization& f, const Matrix& b, const Matrix& c, Complex lambda) {
            PencilSpec p;
            p.b = b;
            p.c = c;
            return symmetrized_residual(f, p, lambda);
        },
        py::arg("factorization"), py::arg("b"), py::arg("c"), py::arg("lam"),
        "Norm of Q(lambda) minus the symmetrized factor product");
    m.def(
        "ordered_residual",
        [](const Factorization& f, const Matrix& b, const Matrix& c, Complex lambda) {
            PencilSpec p;
            p.b = b;
            p.c = c;
            return ordered_residual(f, p, lambda);
        },
        py::arg("factorization"), py::arg("b"), py::arg("c"), py::arg("lam"),
        "Norm of Q(lambda) minus the ordered factor product (the commutator defect)");
    m.def(
        "check_c1",
        [](const Matrix& b, const Matrix& c, double alpha, double beta, double delta) {
            PencilSpec p;
            p.b = b;
            p.c = c;
            return condition_report_to_dict(check_c1(p, ConditionC1Params{alpha, beta, delta}));
        },
        py::arg("b"), py::arg("c"), py::arg("alpha"), py::arg("beta"), py::arg("delta") = 0.0,
        "Lower-bound certificate Re<(C + alpha)x, x> + beta ||B^2 x||^2 + delta >= 0");
    m.def(
        "estimate_c2",
        [](const Matrix& b, const Matrix& c) {
            PencilSpec p;
            p.b = b;
            p.c = c;
            const C2Estimate est = estimate_c2(p);
            py::dict d;
            d["b_lin"] = est.b_lin;
            d["b_quad"] = est.b_quad;
            d["a_est"] = est.a_est;
            d["report"] = condition_report_to_dict(est.report);
            return d;
        },
        py::arg("b"), py::arg("c"),
        "Relative-bound constants of C with respect to B^2");

    // ------------------------------------------------------------- semigroup
    m.def(
        "contraction_check",
        [](const Matrix& t_op, const std::vector<double>& ts) {
            return ts.empty() ? contraction_check(t_op) : contraction_check(t_op, ts);
        },
        py::arg("t_op"), py::arg("t_samples") = std::vector<double>{},
        "max_t ||exp(-t T)|| over the sample times (default six-point grid)");
    m.def(
        "quasi_sectorial_check",
        [](const Matrix& t_op, double omega) {
            return condition_report_to_dict(quasi_sectorial_check(t_op, omega));
        },
        py::arg("t_op"), py::arg("omega"),
        "Numerical-range membership test for exp(-t T) against the omega region");

    // ------------------------------------------------------------------- bvp
    m.def(
        "solve_bvp",
        [](const Matrix& b, const Matrix& c, const Vector& u0, const Vector& u1,
           const std::vector<double>& x_grid, const std::vector<double>& f_x,
           const std::vector<Vector>& f_values, const std::string& convention) {
            const BvpProblem prob = make_problem(b, c, u0, u1, x_grid, f_x, f_values);
            const Factorization fact = factorize_named(b, c, convention);
            return solution_to_dict(solve_bvp(prob, fact));
        },
        py::arg("b"), py::arg("c"), py::arg("u0"), py::arg("u1"), py::arg("x_grid"),
        py::arg("f_x") = std::vector<double>{}, py::arg("f_values") = std::vector<Vector>{},
        py::arg("convention") = "auto",
        "Solves u'' - 2Bu' - Cu = f, u(0) = u0, u(1) = u1 by the explicit "
        "propagator formula; forcing is piecewise linear through (f_x, f_values)");
    m.def(
        "direct_solve_bvp",
        [](const Matrix& b, const Matrix& c, const Vector& u0, const Vector& u1,
           const std::vector<double>& x_grid, const std::vector<double>& f_x,
           const std::vector<Vector>& f_values, int n_x) {
            const BvpProblem prob = make_problem(b, c, u0, u1, x_grid, f_x, f_values);
            if (n_x <= 0) n_x = static_cast<int>(x_grid.size()) - 2;
            return solution_to_dict(direct_solve(prob, n_x));
        },
        py::arg("b"), py::arg("c"), py::arg("u0"), py::arg("u1"), py::arg("x_grid"),
        py::arg("f_x") = std::vector<double>{}, py::arg("f_values") = std::vector<Vector>{},
        py::arg("n_x") = 0,
        "Second-order finite-difference cross-check for the same problem");

    // --------------------------------------------------------- model problem
    m.def(
        "transport_claims",
        [](int n_y) {
            const PdeCoefficients c = default_coefficients(n_y);
            py::list out;
            for (const ClaimReport& cr : verify_claims(c)) out.append(claim_to_dict(cr));
            return out;
        },
        py::arg("n_y") = 64,
        "Verifies the six discrete claims of the default transport example");
    m.def(
        "transport_adjudication",
        [](int n_y) {
            const PencilAdjudication adj = adjudicate_pencil(default_coefficients(n_y));
            py::dict d;
            d["factoring_branch"] = adj.factoring_branch;
            d["unique"] = adj.unique;
            d["gamma"] = adj.gamma;
            d["scale"] = adj.scale;
            py::list branches;
            for (const BranchResidual& br : adj.branches) {
                py::dict bd;
                bd["name"] = br.name;
                bd["factorized"] = br.factorized;
                bd["ordered_residual"] = br.ordered_residual;
                bd["note"] = br.note;
                branches.append(bd);
            }
            d["branches"] = branches;
            return d;
        },
        py::arg("n_y") = 64,
        "Measures which root branch actually factors the model pencil");
    m.def(
        "transport_solve",
        [](int n_y, int n_x) {
            const PdeCoefficients c = default_coefficients(n_y);
            const ManufacturedPde data = manufactured_solution(c, n_x);
            const PdeSolveReport rep = solve_example(c, data.f, data.u0, data.u1, n_x);
            double err = 0.0;
            for (std::size_t i = 0; i < data.exact.size(); ++i) {
                err = std::max(err,
                               (rep.formula.u[i] - data.exact[i]).lpNorm<Eigen::Infinity>());
            }
            py::dict d;
            d["claims_pass"] = rep.claims_pass;
            d["selected_convention"] = rep.selected_convention;
            d["max_discrepancy"] = rep.max_discrepancy;
            d["convergence_order"] = rep.convergence_order;
            d["manufactured_error"] = err;
            d["n_x"] = rep.n_x;
            d["n_y"] = rep.n_y;
            return d;
        },
        py::arg("n_y") = 16, py::arg("n_x") = 8,
        "End-to-end manufactured-solution run of the transport example");

    // ------------------------------------------------------------ quadrature
    m.def(
        "gauss_legendre",
        [](int n, double a, double b) {
            const QuadratureRule rule = gauss_legendre(n, a, b);
            py::dict d;
            d["nodes"] = rule.nodes;
            d["weights"] = rule.weights;
            d["declared_degree"] = rule.declared_degree;
            return d;
        },
        py::arg("n"), py::arg("a") = 0.0, py::arg("b") = 1.0,
        "Gauss-Legendre nodes and weights on [a, b]");
}
