// SPDX-License-Identifier: Apache-2.0
#include "qpencil/pde_example.hpp"

#include "qpencil/matrix_functions.hpp"
#include "qpencil/operator_core.hpp"
#include "qpencil/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace qpencil {

namespace {

double quiet_nan() { return std::numeric_limits<double>::quiet_NaN(); }

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// Centered first derivative of uniform samples, one-sided second order at the
// endpoints.
std::vector<double> stencil_derivative(const std::vector<double>& g, double h) {
    const std::size_t m = g.size();
    std::vector<double> d(m, 0.0);
    for (std::size_t j = 1; j + 1 < m; ++j) {
        d[j] = (g[j + 1] - g[j - 1]) / (2.0 * h);
    }
    d[0] = (-3.0 * g[0] + 4.0 * g[1] - g[2]) / (2.0 * h);
    d[m - 1] = (3.0 * g[m - 1] - 4.0 * g[m - 2] + g[m - 3]) / (2.0 * h);
    return d;
}

std::vector<double> sample(const CoefficientFunction& fn, const std::vector<double>& ys) {
    std::vector<double> out(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) out[i] = fn(ys[i]);
    return out;
}

constexpr const char* kDiscreteNote =
    "; discrete verification at this grid approximates the continuous claim "
    "(consistency, not proof)";

struct AdjResult {
    PdeBounds bounds;
    PencilAdjudication report;
    std::optional<Factorization> selected;
};

AdjResult adjudicate_impl(const PdeCoefficients& c) {
    AdjResult out;
    out.bounds = compute_bounds(c);
    const Matrix b = discretize_b(c);
    const Matrix c_h = discretize_c(c);
    const Eigen::Index n = b.rows();
    const Matrix c_abs = out.bounds.gamma * Matrix::Identity(n, n) - c_h;

    PencilAdjudication& adj = out.report;
    adj.pencil = PencilSpec{b, c_abs};
    adj.gamma = out.bounds.gamma;
    const double nb = op_norm(b);
    adj.scale = std::max(1.0, nb * nb + op_norm(c_abs));

    Factorization rotated_fact;
    bool have_rotated = false;
    Factorization literal_fact;
    bool have_literal = false;

    {
        BranchResidual br;
        br.name = "real_root";
        br.note = "Z = B +/- (B^2 + C)^{1/2}";
        try {
            const Factorization f = factorize(adj.pencil, Convention::real_root);
            br.factorized = true;
            br.ordered_residual = ordered_residual(f, adj.pencil, Complex(0.0, 0.0));
        } catch (const Error& e) {
            br.factorized = false;
            br.ordered_residual = quiet_nan();
            br.note = e.what();
        }
        adj.branches.push_back(br);
    }
    {
        BranchResidual br;
        br.name = "rotated_root";
        br.note = "Z = B +/- i (-(B^2 + C))^{1/2}";
        try {
            rotated_fact = factorize(adj.pencil, Convention::rotated_root);
            have_rotated = true;
            br.factorized = true;
            br.ordered_residual = ordered_residual(rotated_fact, adj.pencil, Complex(0.0, 0.0));
        } catch (const Error& e) {
            br.factorized = false;
            br.ordered_residual = quiet_nan();
            br.note = e.what();
        }
        adj.branches.push_back(br);
    }
    {
        BranchResidual br;
        br.name = "negative_root_literal";
        br.note = "Z = B +/- (-(B^2 + C))^{1/2} taken as a real combination";
        try {
            const Matrix lambda = b * b + c_abs;
            literal_fact.lambda = lambda;
            literal_fact.s = principal_sqrt(Matrix(-lambda));
            literal_fact.z1 = b + literal_fact.s;
            literal_fact.z2 = b - literal_fact.s;
            literal_fact.convention = Convention::rotated_root;  // storage only
            literal_fact.commutator_norm =
                op_norm(Matrix(b * literal_fact.s - literal_fact.s * b));
            have_literal = true;
            br.factorized = true;
            br.ordered_residual = ordered_residual(literal_fact, adj.pencil, Complex(0.0, 0.0));
        } catch (const Error& e) {
            br.factorized = false;
            br.ordered_residual = quiet_nan();
            br.note = e.what();
        }
        adj.branches.push_back(br);
    }

    const double threshold = 1e-8 * adj.scale;
    const auto branch_passes = [&](const BranchResidual& br) {
        return br.factorized && std::isfinite(br.ordered_residual) &&
               br.ordered_residual <= threshold;
    };
    const bool rot_pass = branch_passes(adj.branches[1]);
    const bool lit_pass = branch_passes(adj.branches[2]);
    adj.unique = (rot_pass != lit_pass);
    if (adj.unique) {
        adj.factoring_branch = rot_pass ? "rotated_root" : "negative_root_literal";
        if (rot_pass && have_rotated) out.selected = rotated_fact;
        if (lit_pass && have_literal) out.selected = literal_fact;
    } else {
        adj.factoring_branch = (rot_pass && lit_pass) ? "both" : "none";
    }
    return out;
}

std::vector<double> uniform_grid(std::size_t node_count) {
    std::vector<double> xs(node_count);
    const double h = 1.0 / static_cast<double>(node_count - 1);
    for (std::size_t j = 0; j < node_count; ++j) xs[j] = static_cast<double>(j) * h;
    xs.front() = 0.0;
    xs.back() = 1.0;
    return xs;
}

double solution_max_discrepancy(const BvpSolution& a, const BvpSolution& b) {
    if (a.u.size() != b.u.size()) {
        throw ShapeMismatch("solve_example: solver grids disagree");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < a.u.size(); ++i) {
        worst = std::max(worst, (a.u[i] - b.u[i]).lpNorm<Eigen::Infinity>());
    }
    return worst;
}

}  // namespace

double CoefficientFunction::operator()(double y) const {
    if (is_poly) {
        double acc = 0.0;
        for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * y + coeffs[i];
        return acc;
    }
    if (x.empty()) return 0.0;
    if (x.size() == 1 || y <= x.front()) return values.front();
    if (y >= x.back()) return values.back();
    const auto it = std::upper_bound(x.begin(), x.end(), y);
    const std::size_t hi = static_cast<std::size_t>(it - x.begin());
    const std::size_t lo = hi - 1;
    const double theta = (y - x[lo]) / (x[hi] - x[lo]);
    return (1.0 - theta) * values[lo] + theta * values[hi];
}

CoefficientFunction poly_coefficient(std::vector<double> coeffs) {
    for (double v : coeffs) {
        if (!std::isfinite(v)) {
            throw ConstraintViolated("poly_coefficient: non-finite coefficient");
        }
    }
    CoefficientFunction fn;
    fn.is_poly = true;
    fn.coeffs = std::move(coeffs);
    return fn;
}

CoefficientFunction sampled_coefficient(std::vector<double> x, std::vector<double> values) {
    if (x.empty() || x.size() != values.size()) {
        throw ShapeMismatch("sampled_coefficient: need matching, non-empty samples");
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(values[i])) {
            throw ConstraintViolated("sampled_coefficient: non-finite sample");
        }
        if (i > 0 && !(x[i] > x[i - 1])) {
            throw ConstraintViolated("sampled_coefficient: abscissae must be strictly increasing");
        }
    }
    CoefficientFunction fn;
    fn.is_poly = false;
    fn.x = std::move(x);
    fn.values = std::move(values);
    return fn;
}

void validate(const PdeCoefficients& c, const char* who) {
    if (c.n_y < 3) {
        throw ConstraintViolated(std::string(who) + ": n_y must be at least 3");
    }
    if (!(c.r > 0.0) || !std::isfinite(c.r)) {
        throw ConstraintViolated(std::string(who) + ": r must be positive");
    }
    if (!std::isfinite(c.alpha) || !std::isfinite(c.beta.real()) ||
        !std::isfinite(c.beta.imag()) || !std::isfinite(c.epsilon)) {
        throw ConstraintViolated(std::string(who) + ": non-finite coefficient data");
    }
    for (double y : full_grid(c.n_y)) {
        const double v = c.p0(y);
        if (!std::isfinite(v) || v == 0.0) {
            throw ConstraintViolated(std::string(who) + ": p0 must be nonzero on the grid (y = " +
                                     fmt(y) + ")");
        }
        if (!std::isfinite(c.p1(y))) {
            throw ConstraintViolated(std::string(who) + ": p1 is non-finite on the grid");
        }
    }
}

PdeCoefficients default_coefficients(int n_y) {
    PdeCoefficients c;
    c.p0 = poly_coefficient({1.0, 0.5});
    c.p1 = poly_coefficient({1.0});
    c.alpha = 1.0;
    c.beta = Complex(1.0, 0.0);
    c.r = 1.0;
    c.epsilon = 0.0;  // auto
    c.n_y = n_y;
    return c;
}

std::vector<double> full_grid(int n_y) {
    if (n_y < 1) {
        throw ConstraintViolated("full_grid: n_y must be positive");
    }
    return uniform_grid(static_cast<std::size_t>(n_y) + 2);
}

std::vector<double> interior_grid(int n_y) {
    std::vector<double> full = full_grid(n_y);
    return std::vector<double>(full.begin() + 1, full.end() - 1);
}

Matrix discretize_b(const PdeCoefficients& c) {
    validate(c, "discretize_b");
    const int n = c.n_y;
    const double h = 1.0 / static_cast<double>(n + 1);
    Matrix b = Matrix::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        const double y = static_cast<double>(k + 1) * h;
        const double p0k = c.p0(y);
        if (k + 1 < n) b(k, k + 1) = Complex(p0k / (2.0 * h), 0.0);
        if (k > 0) b(k, k - 1) = Complex(-p0k / (2.0 * h), 0.0);
        b(k, k) += Complex(c.p1(y), 0.0);
    }
    return b;
}

Matrix discretize_c(const PdeCoefficients& c) {
    const Matrix b = discretize_b(c);
    return c.alpha * b + c.beta * Matrix::Identity(b.rows(), b.cols());
}

PdeBounds compute_bounds(const PdeCoefficients& c) {
    validate(c, "compute_bounds");
    const std::vector<double> ys = full_grid(c.n_y);
    const double h = 1.0 / static_cast<double>(c.n_y + 1);
    const std::vector<double> p0 = sample(c.p0, ys);
    const std::vector<double> p1 = sample(c.p1, ys);
    const std::vector<double> dp0 = stencil_derivative(p0, h);
    const std::vector<double> dp1 = stencil_derivative(p1, h);

    const std::size_t m = ys.size();
    std::vector<double> phi0(m), phi1(m), phi2(m);
    for (std::size_t j = 0; j < m; ++j) {
        phi0[j] = -p0[j] * p0[j];
        phi1[j] = -p0[j] * (dp0[j] + 2.0 * p1[j]);
        phi2[j] = -(p1[j] * p1[j] + p0[j] * dp1[j]);
    }
    const std::vector<double> dphi0 = stencil_derivative(phi0, h);

    PdeBounds out;
    double min_p0_sq = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) min_p0_sq = std::min(min_p0_sq, p0[j] * p0[j]);
    out.m0 = min_p0_sq * (1.0 - 1e-6);  // strict: -phi0 > m0 > 0
    out.m1 = 0.0;
    out.m2 = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        out.m1 = std::max(out.m1, std::abs(phi1[j] - dphi0[j]));
        out.m2 = std::max(out.m2, std::abs(phi2[j]));
    }

    double eps = c.epsilon;
    if (!(eps > 0.0)) {
        eps = (out.m1 > 0.0) ? out.m0 / (8.0 * out.m1 * (1.0 + c.r)) : 1.0;
    }
    out.epsilon_used = eps;
    const double slack = out.m0 - eps * (1.0 + c.r) * out.m1;
    if (!(slack > 0.0)) {
        throw ConstraintViolated("compute_bounds: m0 - eps (1+r) M1 = " + fmt(slack) +
                                 " must be positive (m0 = " + fmt(out.m0) +
                                 ", eps = " + fmt(eps) + ", r = " + fmt(c.r) +
                                 ", M1 = " + fmt(out.m1) + ")");
    }
    out.gamma = -((c.r + 1.0) / (4.0 * eps) * out.m1 + out.m2);
    return out;
}

PencilAdjudication adjudicate_pencil(const PdeCoefficients& c) {
    return adjudicate_impl(c).report;
}

std::vector<ClaimReport> verify_claims(const PdeCoefficients& c) {
    validate(c, "verify_claims");
    const PdeBounds bounds = compute_bounds(c);
    const Matrix b = discretize_b(c);
    const Matrix c_h = discretize_c(c);
    const Eigen::Index n = b.rows();
    const Matrix ident = Matrix::Identity(n, n);
    const double gamma = bounds.gamma;

    const auto tol_for = [](const Matrix& m) { return 1e-10 * std::max(1.0, m.norm()); };

    std::vector<ClaimReport> claims;
    claims.reserve(6);

    {
        ClaimReport cr;
        cr.claim = 1;
        cr.grid = c.n_y;
        const Matrix m = -(b * b) - gamma * ident;
        const double omega = std::atan(1.0 / c.r);
        const SectorReport rep = sector_test(m, Sector{Complex(0.0, 0.0), omega});
        cr.pass = rep.pass;
        cr.margin = rep.margin;
        cr.notes = "-B^2 - gamma I against the sector of half-angle arctan(1/r) = " + fmt(omega) +
                   kDiscreteNote;
        claims.push_back(cr);
    }
    {
        ClaimReport cr;
        cr.claim = 2;
        cr.grid = c.n_y;
        const double m = accretivity_margin(c_h);
        cr.margin = m;
        cr.pass = m >= -tol_for(c_h);
        double hyp = std::numeric_limits<double>::infinity();
        const std::vector<double> ys = full_grid(c.n_y);
        const double h = 1.0 / static_cast<double>(c.n_y + 1);
        const std::vector<double> dp0 = stencil_derivative(sample(c.p0, ys), h);
        for (std::size_t j = 0; j < ys.size(); ++j) {
            hyp = std::min(hyp, c.alpha * c.p1(ys[j]) + c.beta.real() -
                                    0.5 * c.alpha * dp0[j]);
        }
        cr.notes = "accretivity of C; grid min of alpha p1 + Re(beta) - (alpha/2) p0' = " +
                   fmt(hyp) + kDiscreteNote;
        claims.push_back(cr);
    }
    {
        ClaimReport cr;
        cr.claim = 3;
        cr.grid = c.n_y;
        const double m = accretivity_margin(b);
        cr.margin = m;
        cr.pass = m >= -tol_for(b);
        double hyp = std::numeric_limits<double>::infinity();
        const std::vector<double> ys = full_grid(c.n_y);
        const double h = 1.0 / static_cast<double>(c.n_y + 1);
        const std::vector<double> dp0 = stencil_derivative(sample(c.p0, ys), h);
        for (std::size_t j = 0; j < ys.size(); ++j) {
            hyp = std::min(hyp, c.p1(ys[j]) - 0.5 * dp0[j]);
        }
        cr.notes = "accretivity of B; grid min of p1 - p0'/2 = " + fmt(hyp) + kDiscreteNote;
        claims.push_back(cr);
    }
    const Matrix neg_lambda = -(b * b) + c_h - gamma * ident;
    {
        ClaimReport cr;
        cr.claim = 4;
        cr.grid = c.n_y;
        const double m = accretivity_margin(neg_lambda);
        cr.margin = m;
        cr.pass = m >= -tol_for(neg_lambda);
        cr.notes = std::string("accretivity of -B^2 + C - gamma I") + kDiscreteNote;
        claims.push_back(cr);
    }
    {
        ClaimReport cr;
        cr.claim = 5;
        cr.grid = c.n_y;
        Eigen::JacobiSVD<Matrix> svd(neg_lambda);
        const double smax = svd.singularValues()(0);
        const double smin = svd.singularValues()(svd.singularValues().size() - 1);
        cr.margin = smin;
        cr.pass = smin > 1e-12 * std::max(1.0, smax);
        cr.notes = std::string("invertibility of -B^2 + C - gamma I (smallest singular value)") +
                   kDiscreteNote;
        claims.push_back(cr);
    }
    {
        ClaimReport cr;
        cr.claim = 6;
        cr.grid = c.n_y;
        const AdjResult adj = adjudicate_impl(c);
        std::ostringstream notes;
        notes << "factoring branch: " << adj.report.factoring_branch << "; ordered residuals:";
        for (const BranchResidual& br : adj.report.branches) {
            notes << " " << br.name << " = " << fmt(br.ordered_residual);
        }
        if (adj.report.unique && adj.selected.has_value()) {
            const Factorization& fact = *adj.selected;
            const double rmax = 10.0 * (op_norm(b) + op_norm(fact.s)) + 1.0;
            const double r1 = sector_shift_search(fact.z1, 1e-6, rmax);
            const double r2 = sector_shift_search(Matrix(-fact.z2), 1e-6, rmax);
            const double w1 = contraction_check(Matrix(fact.z1 + r1 * ident));
            const double w2 = contraction_check(Matrix(-fact.z2 + r2 * ident));
            const double worst = std::max(w1, w2);
            cr.margin = 1.0 - worst;
            cr.pass = worst <= 1.0 + 1e-10;
            notes << "; shifts r1 = " << fmt(r1) << ", r2 = " << fmt(r2)
                  << "; contraction norms " << fmt(w1) << ", " << fmt(w2);
        } else {
            cr.margin = 0.0;
            cr.pass = false;
            notes << "; the exactly-one-branch dichotomy failed";
        }
        cr.notes = notes.str() + kDiscreteNote;
        claims.push_back(cr);
    }
    return claims;
}

const char* to_string(BranchChoice b) {
    switch (b) {
        case BranchChoice::automatic: return "auto";
        case BranchChoice::real_root: return "real_root";
        case BranchChoice::rotated_root: return "rotated_root";
    }
    return "unknown";
}

ManufacturedPde manufactured_solution(const PdeCoefficients& c, int n_x) {
    validate(c, "manufactured_solution");
    if (n_x < 3) {
        throw ConstraintViolated("manufactured_solution: need at least 3 interior x nodes");
    }
    const double gamma = compute_bounds(c).gamma;
    const std::vector<double> ys = interior_grid(c.n_y);
    ManufacturedPde out;
    out.x_grid = uniform_grid(static_cast<std::size_t>(n_x) + 2);
    out.f.x = out.x_grid;
    out.f.values.reserve(out.x_grid.size());
    out.exact.reserve(out.x_grid.size());
    for (double x : out.x_grid) {
        const double sx = std::sin(kPi * x);
        const double cx = std::cos(kPi * x);
        Vector fx(static_cast<Eigen::Index>(ys.size()));
        Vector ex(static_cast<Eigen::Index>(ys.size()));
        for (std::size_t j = 0; j < ys.size(); ++j) {
            const double y = ys[j];
            const double p0 = c.p0(y);
            const double p1 = c.p1(y);
            const double sy = std::sin(kPi * y);
            const double cy = std::cos(kPi * y);
            const double u = sy * cx;
            const double ux = -kPi * sx * sy;
            const double uxx = -kPi * kPi * cx * sy;
            const double uy = kPi * cy * cx;
            const double uxy = -kPi * kPi * sx * cy;
            const Complex val = Complex(uxx - 2.0 * p0 * uxy - 2.0 * p1 * ux +
                                            c.alpha * p0 * uy - gamma * u,
                                        0.0) +
                                (c.alpha * p1 + c.beta) * u;
            fx(static_cast<Eigen::Index>(j)) = val;
            ex(static_cast<Eigen::Index>(j)) = Complex(u, 0.0);
        }
        out.f.values.push_back(std::move(fx));
        out.exact.push_back(std::move(ex));
    }
    out.u0 = out.exact.front();
    out.u1 = out.exact.back();
    return out;
}

PdeSolveReport solve_example(const PdeCoefficients& c, const ForcingSamples& f, const Vector& u0,
                             const Vector& u1, int n_x, BranchChoice convention) {
    validate(c, "solve_example");
    if (n_x < 3) {
        throw ConstraintViolated("solve_example: need at least 3 interior x nodes");
    }

    PdeSolveReport rep;
    rep.n_x = n_x;
    rep.n_y = c.n_y;
    rep.claims = verify_claims(c);
    rep.claims_pass = std::all_of(rep.claims.begin(), rep.claims.end(),
                                  [](const ClaimReport& cr) { return cr.pass; });

    AdjResult adj = adjudicate_impl(c);
    rep.bounds = adj.bounds;
    rep.adjudication = adj.report;

    Factorization fact;
    switch (convention) {
        case BranchChoice::automatic:
            if (adj.selected.has_value()) {
                fact = *adj.selected;
                rep.selected_convention = adj.report.factoring_branch;
            } else {
                // Dichotomy failed; fall back to the rotated convention.
                fact = factorize(adj.report.pencil, Convention::rotated_root);
                rep.selected_convention = "rotated_root (fallback)";
            }
            break;
        case BranchChoice::real_root:
            fact = factorize(adj.report.pencil, Convention::real_root);
            rep.selected_convention = "real_root";
            break;
        case BranchChoice::rotated_root:
            fact = factorize(adj.report.pencil, Convention::rotated_root);
            rep.selected_convention = "rotated_root";
            break;
    }

    BvpProblem prob;
    prob.pencil = adj.report.pencil;
    prob.u0 = u0;
    prob.u1 = u1;
    prob.f = f;
    prob.x_grid = uniform_grid(static_cast<std::size_t>(n_x) + 2);
    prob.p_exponent = 2.0;

    rep.formula = solve_bvp(prob, fact);
    rep.direct = direct_solve(prob, n_x);
    rep.max_discrepancy = solution_max_discrepancy(rep.formula, rep.direct);

    const int n_fine = 2 * n_x + 1;  // halves the step
    BvpProblem prob_fine = prob;
    prob_fine.x_grid = uniform_grid(static_cast<std::size_t>(n_fine) + 2);
    const BvpSolution formula_fine = solve_bvp(prob_fine, fact);
    const BvpSolution direct_fine = direct_solve(prob_fine, n_fine);
    rep.fine_discrepancy = solution_max_discrepancy(formula_fine, direct_fine);
    rep.convergence_order = (rep.max_discrepancy > 0.0 && rep.fine_discrepancy > 0.0)
                                ? std::log2(rep.max_discrepancy / rep.fine_discrepancy)
                                : quiet_nan();
    return rep;
}

}  // namespace qpencil
