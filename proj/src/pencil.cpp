// SPDX-License-Identifier: Apache-2.0
#include "qpencil/pencil.hpp"

#include "qpencil/detail/sampling.hpp"
#include "qpencil/matrix_functions.hpp"
#include "qpencil/operator_core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace qpencil {

namespace {

/// Orthonormal null-space basis of a possibly rectangular matrix, with the
/// same relative singular-value cutoff as null_space_basis.
Matrix null_basis_general(const Matrix& a, double rel_tol = 1e-10) {
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = (sv.size() > 0) ? rel_tol * sv(0) : 0.0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff) ++rank;
    }
    return svd.matrixV().rightCols(a.cols() - rank);
}

/// Largest principal angle of span(va) against span(vb) (both orthonormal):
/// zero when va ⊆ vb, pi/2 when some direction of va is orthogonal to vb or
/// vb is too small to contain va.
double inclusion_angle(const Matrix& va, const Matrix& vb) {
    if (va.cols() == 0) return 0.0;
    if (vb.cols() < va.cols()) return kPi / 2;
    Eigen::JacobiSVD<Matrix> svd(vb.adjoint() * va);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    return std::acos(std::clamp(smin, 0.0, 1.0));
}

double lambda_max_hermitian_part(const Matrix& a) {
    Matrix h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

}  // namespace

void validate(const PencilSpec& p, const char* who) { require_same_square(p.b, p.c, who); }

const char* to_string(Convention c) {
    return c == Convention::real_root ? "real_root" : "rotated_root";
}

Convention convention_from_string(const std::string& name) {
    if (name == "real_root") return Convention::real_root;
    if (name == "rotated_root") return Convention::rotated_root;
    throw SchemaError("unknown convention \"" + name +
                      "\" (expected real_root or rotated_root)");
}

ConditionReport check_c1(const PencilSpec& p, const ConditionC1Params& params, int samples,
                         std::uint64_t seed) {
    validate(p, "check_c1");
    if (!(params.alpha >= 0.0)) {
        throw ConstraintViolated("check_c1: alpha must be >= 0");
    }
    if (!(params.beta >= 0.0 && params.beta < 1.0)) {
        throw ConstraintViolated("check_c1: beta must lie in [0, 1)");
    }
    if (!(params.delta >= 0.0)) {
        throw ConstraintViolated("check_c1: delta must be >= 0");
    }
    const Eigen::Index n = p.b.rows();
    const Matrix b2 = p.b * p.b;
    const Matrix cross = p.c.adjoint() * b2;
    // Quadratic form of the delta-free slack: Re<B^2 x, Cx> + alpha ||x||^2
    // + beta ||B^2 x||^2 = x* [Herm(C* B^2) + alpha I + beta (B^2)* B^2] x.
    const Matrix form = 0.5 * (cross + cross.adjoint()) +
                        params.alpha * Matrix::Identity(n, n) +
                        params.beta * (b2.adjoint() * b2);

    ConditionReport rep;
    rep.condition = "C1";
    rep.parameters["alpha"] = params.alpha;
    rep.parameters["beta"] = params.beta;
    rep.parameters["delta"] = params.delta;
    const double scale = std::max(1.0, form.norm() + params.delta * b2.norm());

    if (params.delta == 0.0) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(form, Eigen::EigenvaluesOnly);
        rep.margin = es.eigenvalues().minCoeff();
        rep.mode = "exact";
        rep.pass = rep.margin >= -1e-12 * scale;
        rep.notes = "exact eigenvalue certificate (delta = 0)";
        return rep;
    }

    if (samples < 1) {
        throw ConstraintViolated("check_c1: samples must be positive");
    }
    const auto slack_of = [&](const Vector& x) {
        return std::real(x.dot(form * x)) + params.delta * (b2 * x).norm();
    };
    detail::UnitSampler sampler(seed, n);
    double best = std::numeric_limits<double>::infinity();
    Vector best_x;
    for (int i = 0; i < samples; ++i) {
        const Vector x = sampler.next();
        const double v = slack_of(x);
        if (v < best) {
            best = v;
            best_x = x;
        }
    }
    // A second deterministic starting point: the minimizer of the delta-free
    // part, often close to the true minimizer of the full slack.
    {
        Eigen::SelfAdjointEigenSolver<Matrix> es(form);
        Vector x0 = es.eigenvectors().col(0);
        const double v = slack_of(x0);
        if (v < best) {
            best = v;
            best_x = x0;
        }
    }
    // Projected-gradient refinement on the unit sphere.
    Vector x = best_x;
    double eta = 1.0;
    for (int iter = 0; iter < 300; ++iter) {
        Vector g = 2.0 * (form * x);
        const double bn = (b2 * x).norm();
        if (bn > std::numeric_limits<double>::min()) {
            g += (params.delta / bn) * (b2.adjoint() * (b2 * x));
        }
        g -= Complex(std::real(x.dot(g)), 0.0) * x;  // tangent component only
        if (g.norm() <= 1e-14 * scale) break;
        bool improved = false;
        for (int trial = 0; trial < 40 && !improved; ++trial) {
            const Vector xn = (x - eta * g).normalized();
            const double v = slack_of(xn);
            if (v < best) {
                best = v;
                x = xn;
                improved = true;
                eta *= 1.5;
            } else {
                eta *= 0.5;
            }
        }
        if (!improved) break;
    }
    rep.margin = best;
    rep.mode = "sampled";
    rep.samples = samples;
    rep.seed = seed;
    rep.pass = rep.margin >= -1e-10 * scale;
    rep.notes = "sampled certificate (unit-vector Monte Carlo + projected-gradient refinement)";
    return rep;
}

std::vector<double> default_t_grid(const PencilSpec& p) {
    validate(p, "default_t_grid");
    const Matrix b2 = p.b * p.b;
    const double nb2 = op_norm(b2);
    const double scale = nb2 > 0.0 ? nb2 : 1.0;
    std::vector<double> grid(200);
    for (int k = 0; k < 200; ++k) {
        grid[k] = scale * std::pow(10.0, -6.0 + 12.0 * k / 199.0);
    }
    return grid;
}

C2Estimate estimate_c2(const PencilSpec& p, const std::vector<double>& t_grid) {
    validate(p, "estimate_c2");
    if (t_grid.empty()) {
        throw ConstraintViolated("estimate_c2: t grid must be non-empty");
    }
    for (double t : t_grid) {
        if (!(t > 0.0) || !std::isfinite(t)) {
            throw ConstraintViolated("estimate_c2: grid points must be positive reals");
        }
    }
    const Matrix b2 = p.b * p.b;
    const Matrix minus_b2 = -b2;
    const auto value_at = [&](double t) {
        return op_norm(p.c * resolvent(minus_b2, Complex(t, 0.0)));
    };

    std::vector<double> grid = t_grid;
    std::sort(grid.begin(), grid.end());
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = value_at(grid[i]);

    int rounds = 0;
    while (rounds < 6) {
        const auto it = std::max_element(vals.begin(), vals.end());
        const std::size_t arg = static_cast<std::size_t>(it - vals.begin());
        if (arg != 0 && arg + 1 != vals.size()) break;  // supremum attained interior
        const double prev_best = *it;
        std::vector<double> fresh;
        if (arg == 0) {
            const double lo = grid.front() / 1e4;
            for (int k = 0; k < 25; ++k) {
                fresh.push_back(lo * std::pow(grid.front() / lo, k / 25.0));
            }
            grid.insert(grid.begin(), fresh.begin(), fresh.end());
            std::vector<double> fv(fresh.size());
            for (std::size_t i = 0; i < fresh.size(); ++i) fv[i] = value_at(fresh[i]);
            vals.insert(vals.begin(), fv.begin(), fv.end());
        } else {
            const double hi = grid.back() * 1e4;
            for (int k = 1; k <= 25; ++k) {
                fresh.push_back(grid.back() * std::pow(hi / grid.back(), k / 25.0));
            }
            for (double t : fresh) {
                grid.push_back(t);
                vals.push_back(value_at(t));
            }
        }
        const double new_best = *std::max_element(vals.begin(), vals.end());
        ++rounds;
        if (new_best <= prev_best * (1.0 + 1e-12)) break;  // boundary value was already flat
    }

    C2Estimate est;
    const auto it = std::max_element(vals.begin(), vals.end());
    est.b_lin = *it;
    est.b_quad = est.b_lin * est.b_lin;
    const Matrix gap = p.c.adjoint() * p.c - est.b_quad * (b2.adjoint() * b2);
    est.a_est = std::max(0.0, lambda_max_hermitian_part(gap));

    ConditionReport& rep = est.report;
    rep.condition = "C2";
    rep.mode = "sampled";
    rep.samples = static_cast<int>(grid.size());
    rep.margin = 1.0 - est.b_quad;
    rep.pass = est.b_quad < 1.0;
    rep.parameters["b_lin"] = est.b_lin;
    rep.parameters["b_quad"] = est.b_quad;
    rep.parameters["a_est"] = est.a_est;
    rep.parameters["t_star"] = grid[static_cast<std::size_t>(it - vals.begin())];
    std::ostringstream os;
    os << "sup_t ||C (B^2 + tI)^{-1}|| scanned on " << grid.size() << " grid points ("
       << rounds << " boundary extensions); relative bound must stay below 1";
    rep.notes = os.str();
    return est;
}

C2Estimate estimate_c2(const PencilSpec& p) { return estimate_c2(p, default_t_grid(p)); }

ConditionReport check_c2_exact(const PencilSpec& p, const ConditionC2Params& params) {
    validate(p, "check_c2_exact");
    if (!(params.a >= 0.0)) {
        throw ConstraintViolated("check_c2_exact: a must be >= 0");
    }
    if (!(params.b >= 0.0 && params.b < 1.0)) {
        throw ConstraintViolated("check_c2_exact: b must lie in [0, 1)");
    }
    const Eigen::Index n = p.b.rows();
    const Matrix b2 = p.b * p.b;
    const Matrix gap = p.c.adjoint() * p.c - params.a * Matrix::Identity(n, n) -
                       params.b * (b2.adjoint() * b2);
    ConditionReport rep;
    rep.condition = "C2";
    rep.mode = "exact";
    rep.margin = -lambda_max_hermitian_part(gap);
    const double scale = std::max(1.0, gap.norm());
    rep.pass = rep.margin >= -1e-12 * scale;
    rep.parameters["a"] = params.a;
    rep.parameters["b"] = params.b;
    rep.notes = "exact eigenvalue certificate of ||Cx||^2 <= a ||x||^2 + b ||B^2 x||^2";
    return rep;
}

ConditionReport check_c3(const PencilSpec& p, double t0) {
    validate(p, "check_c3");
    if (!(t0 > 0.0) || !std::isfinite(t0)) {
        throw ConstraintViolated("check_c3: t0 must be a positive real");
    }
    const Eigen::Index n = p.b.rows();
    const Matrix b2 = p.b * p.b;
    const Matrix inv = resolvent(Matrix(-b2), Complex(t0, 0.0));
    const Matrix m = Matrix::Identity(n, n) + p.c * inv;
    Eigen::JacobiSVD<Matrix> svd(m);
    const double smin = svd.singularValues()(n - 1);
    const double smax = svd.singularValues()(0);
    ConditionReport rep;
    rep.condition = "C3";
    rep.mode = "exact";
    rep.margin = smin;
    const double tol = 1e-12 * std::max(1.0, smax);
    rep.pass = smin > tol;
    rep.parameters["t0"] = t0;
    rep.parameters["tol"] = tol;
    rep.notes = "smallest singular value of I + C (B^2 + t0 I)^{-1}";
    return rep;
}

ConditionReport check_c4_c5(const PencilSpec& p) {
    validate(p, "check_c4_c5");
    ConditionReport rep;
    rep.condition = "C4C5";
    rep.mode = "exact";
    rep.margin = accretivity_margin(p.b);
    rep.pass = rep.margin >= -1e-12 * std::max(1.0, p.b.norm());
    rep.notes =
        "finite dimension: D(B) subset of D(C) is automatic and C is bounded, so both "
        "conditions reduce to accretivity of B; accretive and m-accretive coincide";
    return rep;
}

std::pair<Matrix, ConditionReport> build_lambda(const PencilSpec& p) {
    validate(p, "build_lambda");
    const Matrix b2 = p.b * p.b;
    Matrix lambda = b2 + p.c;
    const double margin_b2 = accretivity_margin(b2);
    const double margin_c = accretivity_margin(p.c);
    const double margin_lambda = accretivity_margin(lambda);
    const bool hyp_met = margin_b2 >= -1e-12 * std::max(1.0, b2.norm()) &&
                         margin_c >= -1e-12 * std::max(1.0, p.c.norm());
    ConditionReport rep;
    rep.condition = "Lambda";
    rep.mode = "exact";
    rep.parameters["margin_b2"] = margin_b2;
    rep.parameters["margin_c"] = margin_c;
    rep.parameters["margin_lambda"] = margin_lambda;
    if (hyp_met) {
        rep.margin = margin_lambda;
        rep.pass = margin_lambda >= -1e-12 * std::max(1.0, lambda.norm());
        rep.notes = "accretive-sum certificate: B^2 and C accretive, hence Lambda accretive";
    } else {
        rep.margin = std::min(margin_b2, margin_c);
        rep.pass = false;
        rep.notes =
            "hypothesis unmet: B^2 or C is not accretive; accretivity of Lambda is not "
            "asserted by the sum certificate";
    }
    return {std::move(lambda), std::move(rep)};
}

Factorization factorize(const PencilSpec& p, Convention convention) {
    validate(p, "factorize");
    Factorization f;
    f.convention = convention;
    f.lambda = p.b * p.b + p.c;
    f.lambda_margin = accretivity_margin(f.lambda);
    if (convention == Convention::real_root) {
        f.s = principal_sqrt(f.lambda);
        f.z1 = p.b + f.s;
        f.z2 = p.b - f.s;
    } else {
        f.s = principal_sqrt(Matrix(-f.lambda));
        const Complex iu(0.0, 1.0);
        f.z1 = p.b + iu * f.s;
        f.z2 = p.b - iu * f.s;
    }
    f.commutator_norm = op_norm(p.b * f.s - f.s * p.b);
    return f;
}

Factorization factorize_degenerate(const PencilSpec& p) {
    validate(p, "factorize_degenerate");
    Factorization f;
    f.lambda = p.b * p.b + p.c;
    const double scale = std::max(1.0, p.b.norm() * p.b.norm() + p.c.norm());
    if (op_norm(f.lambda) > 1e-12 * scale) {
        throw ConstraintViolated(
            "factorize_degenerate: Lambda = B^2 + C is not numerically zero");
    }
    const Eigen::Index n = p.b.rows();
    f.s = Matrix::Zero(n, n);
    f.z1 = p.b;
    f.z2 = p.b;
    f.convention = Convention::real_root;
    f.commutator_norm = 0.0;
    f.lambda_margin = accretivity_margin(f.lambda);
    f.defective = true;
    return f;
}

Vector evaluate_pencil(const PencilSpec& p, Complex lambda, const Vector& x) {
    validate(p, "evaluate_pencil");
    if (x.size() != p.b.rows()) {
        throw ShapeMismatch("evaluate_pencil: vector dimension does not match the pencil");
    }
    return lambda * lambda * x - 2.0 * lambda * (p.b * x) - p.c * x;
}

Matrix pencil_matrix(const PencilSpec& p, Complex lambda) {
    validate(p, "pencil_matrix");
    const Eigen::Index n = p.b.rows();
    return lambda * lambda * Matrix::Identity(n, n) - 2.0 * lambda * p.b - p.c;
}

double symmetrized_residual(const Factorization& f, const PencilSpec& p, Complex lambda) {
    validate(p, "symmetrized_residual");
    const Eigen::Index n = p.b.rows();
    const Matrix ident = Matrix::Identity(n, n);
    const Matrix f1 = lambda * ident - f.z1;
    const Matrix f2 = lambda * ident - f.z2;
    return op_norm(pencil_matrix(p, lambda) - 0.5 * (f1 * f2 + f2 * f1));
}

double ordered_residual(const Factorization& f, const PencilSpec& p, Complex lambda) {
    validate(p, "ordered_residual");
    const Eigen::Index n = p.b.rows();
    const Matrix ident = Matrix::Identity(n, n);
    return op_norm(pencil_matrix(p, lambda) - (lambda * ident - f.z1) * (lambda * ident - f.z2));
}

ConditionReport kernel_inclusion_lambda(const PencilSpec& p, double theta) {
    validate(p, "kernel_inclusion_lambda");
    if (!(theta >= 0.0 && theta < kPi / 2)) {
        throw ConstraintViolated("kernel_inclusion_lambda: theta must lie in [0, pi/2)");
    }
    const Eigen::Index n = p.b.rows();
    const Matrix b2 = p.b * p.b;
    const Matrix lambda = b2 + p.c;

    ConditionReport rep;
    rep.condition = "KernelLambda";
    rep.mode = "exact";
    std::string notes;
    if (!sector_test(p.c, Sector{Complex(0.0, 0.0), theta}).pass) {
        notes += "warning: sector hypothesis on C fails at the given theta; ";
    }
    if (accretivity_margin(b2) < -1e-12 * std::max(1.0, b2.norm())) {
        notes += "warning: B^2 is not accretive; ";
    }

    const Matrix n_lambda = null_space_basis(lambda);
    Matrix stacked(2 * n, n);
    stacked << b2, p.c.adjoint();
    const Matrix n_both = null_basis_general(stacked);

    const double tol_angle = 1e-8;
    const double angle = inclusion_angle(n_lambda, n_both);
    rep.margin = tol_angle - angle;
    rep.pass = rep.margin >= 0.0;
    rep.parameters["theta"] = theta;
    rep.parameters["dim_null_lambda"] = static_cast<double>(n_lambda.cols());
    rep.parameters["dim_intersection"] = static_cast<double>(n_both.cols());
    rep.parameters["max_angle"] = angle;
    rep.notes = notes + "N(Lambda) within N(B^2) ∩ N(C*) by principal angles";
    return rep;
}

ConditionReport kernel_identity_z1(const Factorization& f, const PencilSpec& p, double theta) {
    validate(p, "kernel_identity_z1");
    if (!(theta >= 0.0 && theta < kPi / 2)) {
        throw ConstraintViolated("kernel_identity_z1: theta must lie in [0, pi/2)");
    }
    const Eigen::Index n = p.b.rows();

    ConditionReport rep;
    rep.condition = "KernelZ1";
    rep.mode = "exact";
    std::string notes;
    if (f.convention != Convention::real_root) {
        notes += "warning: factorization does not use the real_root convention; ";
    }
    if (!sector_test(p.b, Sector{Complex(0.0, 0.0), theta}).pass) {
        notes += "warning: sector hypothesis on B fails at the given theta; ";
    }

    const Matrix n_z1 = null_space_basis(f.z1);
    Matrix stacked(2 * n, n);
    stacked << p.b, f.s;
    const Matrix n_both = null_basis_general(stacked);

    const double tol_angle = 1e-8;
    const bool dims_equal = n_z1.cols() == n_both.cols();
    const double angle = dims_equal ? max_principal_angle(n_z1, n_both) : kPi / 2;
    rep.margin = tol_angle - angle;
    rep.pass = dims_equal && rep.margin >= 0.0;
    rep.parameters["theta"] = theta;
    rep.parameters["dim_null_z1"] = static_cast<double>(n_z1.cols());
    rep.parameters["dim_intersection"] = static_cast<double>(n_both.cols());
    rep.parameters["max_angle"] = angle;
    rep.notes = notes + "N(Z1) = N(B) ∩ N(S) by dimension match and principal angles";
    return rep;
}

double sector_shift_search(const Matrix& op, double eps, double rmax) {
    if (!(eps >= 0.0) || !std::isfinite(eps)) {
        throw ConstraintViolated("sector_shift_search: eps must be >= 0");
    }
    if (!(rmax > 0.0) || !std::isfinite(rmax)) {
        throw ConstraintViolated("sector_shift_search: rmax must be positive");
    }
    require_square(op, "sector_shift_search");
    const double half_angle = std::min(kPi / 4 + eps, kPi / 2);
    const Matrix ident = Matrix::Identity(op.rows(), op.cols());
    const auto passes = [&](double r) {
        return sector_test(op + r * ident, Sector{Complex(0.0, 0.0), half_angle}).pass;
    };
    if (passes(0.0)) return 0.0;
    if (!passes(rmax)) {
        throw SearchFailed("sector_shift_search: no admissible shift up to the given bound");
    }
    double lo = 0.0;
    double hi = rmax;
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        (passes(mid) ? hi : lo) = mid;
    }
    return hi;
}

std::pair<double, double> factor_shift_search(const Factorization& f, double eps) {
    if (!(eps >= 0.0) || !std::isfinite(eps)) {
        throw ConstraintViolated("factor_shift_search: eps must be >= 0");
    }
    if (f.convention != Convention::real_root) {
        throw ConstraintViolated("factor_shift_search: requires the real_root convention");
    }
    require_square(f.z1, "factor_shift_search");
    const Matrix b = 0.5 * (f.z1 + f.z2);
    const double rmax = 10.0 * (op_norm(b) + op_norm(f.s));
    try {
        return {sector_shift_search(f.z1, eps, rmax),
                sector_shift_search(Matrix(-f.z2), eps, rmax)};
    } catch (const SearchFailed&) {
        throw SearchFailed("factor_shift_search: no admissible shift up to 10 (||B|| + ||S||)");
    }
}

std::vector<std::pair<Complex, Vector>> pencil_eigen(const PencilSpec& p) {
    validate(p, "pencil_eigen");
    const Eigen::Index n = p.b.rows();
    Matrix companion = Matrix::Zero(2 * n, 2 * n);
    companion.topRightCorner(n, n) = Matrix::Identity(n, n);
    companion.bottomLeftCorner(n, n) = p.c;
    companion.bottomRightCorner(n, n) = 2.0 * p.b;
    Eigen::ComplexEigenSolver<Matrix> es(companion, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success) {
        throw Error("pencil_eigen: eigensolver failed on the companion form");
    }
    std::vector<std::pair<Complex, Vector>> pairs;
    pairs.reserve(static_cast<std::size_t>(2 * n));
    for (Eigen::Index i = 0; i < 2 * n; ++i) {
        const Complex lambda = es.eigenvalues()(i);
        Vector v = es.eigenvectors().col(i).head(n);
        const double nv = v.norm();
        if (nv >= 1e-12) {
            v /= nv;
        } else {
            // The top block of [v; lambda v] can underflow for huge |lambda|;
            // recover the direction from the bottom block instead.
            Vector w = es.eigenvectors().col(i).tail(n);
            v = (std::abs(lambda) > 0.0) ? Vector(w / lambda) : w;
            v.normalize();
        }
        pairs.emplace_back(lambda, std::move(v));
    }
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
        if (a.first.real() != b.first.real()) return a.first.real() < b.first.real();
        return a.first.imag() < b.first.imag();
    });
    return pairs;
}

ConditionReport eigenvalue_localization_check(const PencilSpec& p) {
    validate(p, "eigenvalue_localization_check");
    ConditionReport rep;
    rep.condition = "EigenvalueLocalization";
    rep.mode = "exact";
    std::string notes;
    if (!sector_test(p.b, Sector{Complex(0.0, 0.0), kPi / 4}).pass) {
        notes += "warning: B fails the quarter-sector hypothesis; ";
    }
    if (accretivity_margin(p.c) < -1e-12 * std::max(1.0, p.c.norm())) {
        notes += "warning: C is not accretive; ";
    }
    const auto pairs = pencil_eigen(p);
    double max_abs = 0.0;
    for (const auto& [lambda, v] : pairs) max_abs = std::max(max_abs, std::abs(lambda));
    const double scale = 1.0 + max_abs * max_abs + op_norm(p.b) * (1.0 + max_abs);
    const double tol = 1e-9 * scale;
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& [lambda, v] : pairs) {
        const double a = lambda.real();
        const double b = lambda.imag();
        const double re_bvv = std::real(v.dot(p.b * v));
        margin = std::min(margin, a * a - b * b - 2.0 * (a - std::abs(b)) * re_bvv);
    }
    rep.margin = margin;
    rep.pass = margin >= -tol;
    rep.samples = static_cast<int>(pairs.size());
    rep.parameters["tol"] = tol;
    rep.notes =
        notes + "for each pencil eigenpair (a + ib, v): 2 (a - |b|) Re<Bv,v> <= a^2 - b^2";
    return rep;
}

}  // namespace qpencil
