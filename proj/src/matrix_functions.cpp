// SPDX-License-Identifier: Apache-2.0
#include "qpencil/matrix_functions.hpp"

#include "qpencil/detail/sampling.hpp"
#include "qpencil/operator_core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

namespace qpencil {

namespace {

/// log|det(A)| via the diagonal of a partially pivoted LU factor.
double log_abs_det(const Matrix& a) {
    Eigen::PartialPivLU<Matrix> lu(a);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        acc += std::log(std::abs(lu.matrixLU()(i, i)));
    }
    return acc;
}

void reject_spectrum_on_cut(const Matrix& a, const char* who) {
    Eigen::ComplexEigenSolver<Matrix> eig(a, /*computeEigenvectors=*/false);
    if (eig.info() != Eigen::Success) {
        throw NonConvergence(std::string(who) + ": eigenvalue computation failed", 0,
                             std::numeric_limits<double>::quiet_NaN());
    }
    const double tol = 1e-13 * std::max(1.0, a.norm());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const Complex lambda = eig.eigenvalues()(i);
        if (lambda.real() <= tol && std::abs(lambda.imag()) <= tol) {
            throw NegativeRealEigenvalue(
                std::string(who) + ": eigenvalue on the closed negative real axis", lambda);
        }
    }
}

/// Square root of an upper-triangular matrix by the column-wise recurrence;
/// diagonal entries take the principal complex square root.
Matrix triangular_sqrt(const Matrix& t) {
    const Eigen::Index n = t.rows();
    Matrix r = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        r(j, j) = std::sqrt(t(j, j));
        for (Eigen::Index i = j - 1; i >= 0; --i) {
            Complex s = t(i, j);
            for (Eigen::Index k = i + 1; k < j; ++k) {
                s -= r(i, k) * r(k, j);
            }
            r(i, j) = s / (r(i, i) + r(j, j));
        }
    }
    return r;
}

Matrix schur_sqrt(const Matrix& a) {
    Eigen::ComplexSchur<Matrix> schur(a);
    if (schur.info() != Eigen::Success) {
        throw NonConvergence("principal_sqrt: Schur decomposition failed", 0,
                             std::numeric_limits<double>::quiet_NaN());
    }
    const Matrix r = triangular_sqrt(schur.matrixT());
    return schur.matrixU() * r * schur.matrixU().adjoint();
}

/// Coupled Newton iteration Y -> A^{1/2}, Z -> A^{-1/2} with determinant
/// scaling for faster initial contraction.
Matrix denman_beavers_sqrt(const Matrix& a, int max_iterations, double residual_tol) {
    const Eigen::Index n = a.rows();
    const Matrix ident = Matrix::Identity(n, n);
    Matrix y = a;
    Matrix z = ident;
    const double ref = std::max(a.norm(), std::numeric_limits<double>::min());
    double residual = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= max_iterations; ++it) {
        double mu = std::exp(-(log_abs_det(y) + log_abs_det(z)) / (2.0 * static_cast<double>(n)));
        if (!std::isfinite(mu) || mu <= 0.0) {
            mu = 1.0;
        }
        const Matrix ys = mu * y;
        const Matrix zs = mu * z;
        const Matrix y_next = 0.5 * (ys + zs.partialPivLu().solve(ident));
        const Matrix z_next = 0.5 * (zs + ys.partialPivLu().solve(ident));
        const double step = (y_next - ys).norm() / std::max(1.0, y_next.norm());
        y = y_next;
        z = z_next;
        residual = (y * y - a).norm() / ref;
        if (residual <= residual_tol) {
            return y;
        }
        if (step < 1e-15) {
            throw NonConvergence("principal_sqrt: iteration stagnated above tolerance", it,
                                 residual);
        }
    }
    throw NonConvergence("principal_sqrt: iteration cap reached", max_iterations, residual);
}

/// Pade numerator/denominator split: exp(A) ~ (V - U)^{-1} (V + U) where U
/// collects odd powers and V even powers.
Matrix pade_combine(const Matrix& u, const Matrix& v) {
    return (v - u).partialPivLu().solve(v + u);
}

Matrix pade_3_9(const Matrix& a, int order) {
    static const std::array<double, 4> kB3 = {120.0, 60.0, 12.0, 1.0};
    static const std::array<double, 6> kB5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
    static const std::array<double, 8> kB7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                              25200.0,    1512.0,    56.0,      1.0};
    static const std::array<double, 10> kB9 = {17643225600.0, 8821612800.0, 2075673600.0,
                                               302702400.0,   30270240.0,   2162160.0,
                                               110880.0,      3960.0,       90.0,
                                               1.0};
    const Eigen::Index n = a.rows();
    const Matrix ident = Matrix::Identity(n, n);
    const Matrix a2 = a * a;
    Matrix u_poly;  // polynomial in A^2 multiplying A (odd part)
    Matrix v;       // even part
    switch (order) {
        case 3: {
            u_poly = kB3[3] * a2 + kB3[1] * ident;
            v = kB3[2] * a2 + kB3[0] * ident;
            break;
        }
        case 5: {
            const Matrix a4 = a2 * a2;
            u_poly = kB5[5] * a4 + kB5[3] * a2 + kB5[1] * ident;
            v = kB5[4] * a4 + kB5[2] * a2 + kB5[0] * ident;
            break;
        }
        case 7: {
            const Matrix a4 = a2 * a2;
            const Matrix a6 = a4 * a2;
            u_poly = kB7[7] * a6 + kB7[5] * a4 + kB7[3] * a2 + kB7[1] * ident;
            v = kB7[6] * a6 + kB7[4] * a4 + kB7[2] * a2 + kB7[0] * ident;
            break;
        }
        default: {
            const Matrix a4 = a2 * a2;
            const Matrix a6 = a4 * a2;
            const Matrix a8 = a6 * a2;
            u_poly = kB9[9] * a8 + kB9[7] * a6 + kB9[5] * a4 + kB9[3] * a2 + kB9[1] * ident;
            v = kB9[8] * a8 + kB9[6] * a6 + kB9[4] * a4 + kB9[2] * a2 + kB9[0] * ident;
            break;
        }
    }
    return pade_combine(a * u_poly, v);
}

Matrix pade_13(const Matrix& a) {
    static const std::array<double, 14> kB13 = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
        129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
        1323241920.0,        40840800.0,          960960.0,           16380.0,
        182.0,               1.0};
    const Eigen::Index n = a.rows();
    const Matrix ident = Matrix::Identity(n, n);
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    const Matrix u = a * (a6 * (kB13[13] * a6 + kB13[11] * a4 + kB13[9] * a2) + kB13[7] * a6 +
                          kB13[5] * a4 + kB13[3] * a2 + kB13[1] * ident);
    const Matrix v = a6 * (kB13[12] * a6 + kB13[10] * a4 + kB13[8] * a2) + kB13[6] * a6 +
                     kB13[4] * a4 + kB13[2] * a2 + kB13[0] * ident;
    return pade_combine(u, v);
}

double one_norm(const Matrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

using detail::UnitSampler;

}  // namespace

Matrix principal_sqrt(const Matrix& a, const SqrtOptions& opts) {
    require_square(a, "principal_sqrt");
    reject_spectrum_on_cut(a, "principal_sqrt");
    Matrix s;
    if (opts.method == SqrtMethod::schur) {
        s = schur_sqrt(a);
    } else {
        s = denman_beavers_sqrt(a, opts.max_iterations, opts.residual_tol);
    }
    const double ref = std::max(a.norm(), std::numeric_limits<double>::min());
    const double residual = (s * s - a).norm() / ref;
    if (!(residual <= opts.residual_tol) || !s.allFinite()) {
        throw NonConvergence("principal_sqrt: residual exceeds tolerance", 0, residual);
    }
    return s;
}

Matrix expm(const Matrix& a) {
    require_square(a, "expm");
    constexpr double kTheta3 = 1.495585217958292e-2;
    constexpr double kTheta5 = 2.539398330063230e-1;
    constexpr double kTheta7 = 9.504178996162932e-1;
    constexpr double kTheta9 = 2.097847961257068e0;
    constexpr double kTheta13 = 5.371920351148152e0;
    constexpr int kMaxSquarings = 100;

    const double norm1 = one_norm(a);
    if (!std::isfinite(norm1)) {
        throw OverflowError("expm: input has non-finite entries", norm1, 0);
    }
    Matrix result;
    int squarings = 0;
    if (norm1 <= kTheta3) {
        result = pade_3_9(a, 3);
    } else if (norm1 <= kTheta5) {
        result = pade_3_9(a, 5);
    } else if (norm1 <= kTheta7) {
        result = pade_3_9(a, 7);
    } else if (norm1 <= kTheta9) {
        result = pade_3_9(a, 9);
    } else {
        squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
        squarings = std::max(squarings, 0);
        if (squarings > kMaxSquarings) {
            throw OverflowError("expm: norm too large for scaling-and-squaring", norm1,
                                squarings);
        }
        result = pade_13(a * std::ldexp(1.0, -squarings));
        for (int i = 0; i < squarings; ++i) {
            result = result * result;
        }
    }
    if (!result.allFinite()) {
        throw OverflowError("expm: evaluation produced non-finite entries", norm1, squarings);
    }
    return result;
}

Matrix balakrishnan_power(const Matrix& t, double alpha, const QuadratureRule& rule) {
    require_square(t, "balakrishnan_power");
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ConstraintViolated("balakrishnan_power: alpha must lie in (0,1)");
    }
    if (rule.nodes.size() != rule.weights.size() || rule.nodes.empty()) {
        throw ConstraintViolated("balakrishnan_power: malformed quadrature rule");
    }
    if (accretivity_margin(t) < -1e-10 * std::max(1.0, t.norm())) {
        throw ConstraintViolated("balakrishnan_power: operator must be accretive");
    }
    {
        Eigen::JacobiSVD<Matrix> svd(t);
        const double smin = svd.singularValues()(svd.singularValues().size() - 1);
        const double smax = svd.singularValues()(0);
        if (smin <= 1e-13 * std::max(1.0, smax)) {
            throw SingularResolvent("balakrishnan_power: operator is numerically singular",
                                    smin);
        }
    }
    const Eigen::Index n = t.rows();
    const Matrix ident = Matrix::Identity(n, n);
    const Matrix minus_t = -t;
    Matrix acc = Matrix::Zero(n, n);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double tj = rule.nodes[j];
        if (!(tj > 0.0 && tj < 1.0)) {
            throw ConstraintViolated("balakrishnan_power: quadrature node outside (0,1)");
        }
        const double lambda = tj / (1.0 - tj);
        const double jacobian = 1.0 / ((1.0 - tj) * (1.0 - tj));
        const double coeff = rule.weights[j] * std::pow(lambda, alpha - 1.0) * jacobian;
        // T (lambda I + T)^{-1} = I - lambda (lambda I + T)^{-1}; the solve goes
        // through `resolvent` so singular nodes fail loudly.
        const Matrix res = resolvent(minus_t, Complex(lambda, 0.0));
        acc.noalias() += coeff * (ident - lambda * res);
    }
    return (std::sin(kPi * alpha) / kPi) * acc;
}

Matrix balakrishnan_power(const Matrix& t, double alpha) {
    return balakrishnan_power(t, alpha, balakrishnan_rule(alpha));
}

SlackReport kato_square_inequality_check(const Matrix& b, double nu, int samples,
                                         std::uint64_t seed) {
    require_square(b, "kato_square_inequality_check");
    if (!(nu > 0.0)) {
        throw ConstraintViolated("kato_square_inequality_check: nu must be positive");
    }
    if (samples < 1) {
        throw ConstraintViolated("kato_square_inequality_check: samples must be positive");
    }
    const Matrix b2 = b * b;
    UnitSampler sampler(seed, b.rows());
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const Vector x = sampler.next();
        const double bx = (b * x).squaredNorm();
        const double b2x = (b2 * x).squaredNorm();
        worst = std::min(worst, nu + b2x / nu - bx);
    }
    return SlackReport{worst, samples, seed};
}

MomentReport moment_inequality_check(const Matrix& t, int samples, std::uint64_t seed) {
    require_square(t, "moment_inequality_check");
    if (samples < 1) {
        throw ConstraintViolated("moment_inequality_check: samples must be positive");
    }
    const Matrix s = principal_sqrt(t);
    UnitSampler sampler(seed, t.rows());
    double worst = std::numeric_limits<double>::infinity();
    double max_ratio = 0.0;
    for (int i = 0; i < samples; ++i) {
        const Vector x = sampler.next();
        const double tx = (t * x).norm();
        const double sx2 = (s * x).squaredNorm();
        worst = std::min(worst, tx - sx2);
        if (tx > std::numeric_limits<double>::min()) {
            max_ratio = std::max(max_ratio, sx2 / tx);
        }
    }
    return MomentReport{worst, max_ratio, samples, seed};
}

}  // namespace qpencil
