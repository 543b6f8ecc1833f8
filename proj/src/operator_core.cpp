// SPDX-License-Identifier: Apache-2.0
#include "qpencil/operator_core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qpencil {

void require_square(const Matrix& a, const char* who) {
    if (a.rows() < 1 || a.rows() != a.cols()) {
        std::ostringstream os;
        os << who << ": operator must be square with dim >= 1, got " << a.rows() << "x"
           << a.cols();
        throw ShapeMismatch(os.str());
    }
    if (!a.allFinite()) {
        std::ostringstream os;
        os << who << ": operator entries must be finite";
        throw ShapeMismatch(os.str());
    }
}

void require_same_square(const Matrix& a, const Matrix& b, const char* who) {
    require_square(a, who);
    require_square(b, who);
    if (a.rows() != b.rows()) {
        std::ostringstream os;
        os << who << ": operators must share one dimension, got " << a.rows() << " and "
           << b.rows();
        throw ShapeMismatch(os.str());
    }
}

double op_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    // BDCSVD delegates to JacobiSVD below its internal size threshold, so small
    // inputs keep the two-sided Jacobi accuracy while large ones avoid its cost.
    Eigen::BDCSVD<Matrix> svd(a);
    return svd.singularValues()(0);
}

std::pair<Matrix, Matrix> hermitian_split(const Matrix& a) {
    require_square(a, "hermitian_split");
    Matrix h = 0.5 * (a + a.adjoint());
    Matrix k = a - h;  // exact reconstruction: h + k == a bit for bit
    return {std::move(h), std::move(k)};
}

double accretivity_margin(const Matrix& a) {
    require_square(a, "accretivity_margin");
    Matrix h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

NumericalRangeSample numerical_range(const Matrix& a, int m) {
    require_square(a, "numerical_range");
    if (m < 3) throw ShapeMismatch("numerical_range: need at least 3 angles");
    const auto n = a.rows();
    NumericalRangeSample sample;
    sample.angles.resize(m);
    sample.support_values.resize(m);
    sample.boundary_points.resize(m);
    sample.witnesses.resize(n, m);
    for (int k = 0; k < m; ++k) {
        const double theta = 2.0 * kPi * k / m;
        const Complex rot = std::polar(1.0, -theta);
        Matrix h = 0.5 * (rot * a + std::conj(rot) * a.adjoint());
        Eigen::SelfAdjointEigenSolver<Matrix> es(h);
        if (es.info() != Eigen::Success) {
            throw Error("numerical_range: Hermitian eigensolver failed");
        }
        const auto top = n - 1;  // eigenvalues ascending
        Vector x = es.eigenvectors().col(top);
        x.normalize();
        sample.angles[k] = theta;
        sample.support_values[k] = es.eigenvalues()(top);
        sample.boundary_points[k] = x.dot(a * x);  // <Ax, x> = x^* A x
        sample.witnesses.col(k) = x;
    }
    return sample;
}

double support_violation(const NumericalRangeSample& sample, Complex z) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < sample.angles.size(); ++k) {
        const Complex rot = std::polar(1.0, -sample.angles[k]);
        worst = std::max(worst, (rot * z).real() - sample.support_values[k]);
    }
    return worst;
}

SectorReport sector_test(const Matrix& a, const Sector& s) {
    require_square(a, "sector_test");
    if (!(s.half_angle >= 0.0 && s.half_angle <= kPi / 2) || !std::isfinite(std::abs(s.vertex))) {
        throw ShapeMismatch("sector_test: need finite vertex and half_angle in [0, pi/2]");
    }
    const double phi = kPi / 2 - s.half_angle;
    Matrix shifted = a - s.vertex * Matrix::Identity(a.rows(), a.cols());
    SectorReport report;
    report.sector = s;
    report.margin_plus = accretivity_margin(std::polar(1.0, phi) * shifted);
    report.margin_minus = accretivity_margin(std::polar(1.0, -phi) * shifted);
    report.margin = std::min(report.margin_plus, report.margin_minus);
    const double tol = 1e-10 * std::max(1.0, shifted.norm());
    report.pass = report.margin >= -tol;
    return report;
}

Matrix resolvent(const Matrix& a, Complex lambda) {
    require_square(a, "resolvent");
    const auto n = a.rows();
    Matrix m = lambda * Matrix::Identity(n, n) - a;
    Eigen::PartialPivLU<Matrix> lu(m);
    const double rcond = lu.rcond();
    if (!std::isfinite(rcond) || rcond < 1e-12) {
        // settle the question with an exact smallest singular value
        Eigen::JacobiSVD<Matrix> svd(m);
        const double smin = svd.singularValues()(n - 1);
        const double smax = svd.singularValues()(0);
        if (smin <= 1e-13 * std::max(1.0, smax)) {
            std::ostringstream os;
            os << "resolvent: lambda = (" << lambda.real() << ", " << lambda.imag()
               << ") is numerically in the spectrum, smallest singular value " << smin;
            throw SingularResolvent(os.str(), smin);
        }
    }
    return lu.solve(Matrix::Identity(n, n));
}

InclusionReport spectral_inclusion_check(const Matrix& a, int m) {
    require_square(a, "spectral_inclusion_check");
    NumericalRangeSample sample = numerical_range(a, m);
    Eigen::ComplexEigenSolver<Matrix> es(a, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) {
        throw Error("spectral_inclusion_check: eigensolver failed");
    }
    InclusionReport report;
    report.samples = m;
    report.worst_violation = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const Complex ev = es.eigenvalues()(i);
        report.eigenvalues.push_back(ev);
        report.worst_violation = std::max(report.worst_violation, support_violation(sample, ev));
    }
    report.pass = report.worst_violation <= 1e-10 * (1.0 + a.norm());
    return report;
}

Matrix null_space_basis(const Matrix& a, double rel_tol) {
    require_square(a, "null_space_basis");
    const auto n = a.rows();
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = rel_tol * sv(0);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff) ++rank;
    }
    return svd.matrixV().rightCols(n - rank);
}

double max_principal_angle(const Matrix& va, const Matrix& vb) {
    if (va.cols() == 0 && vb.cols() == 0) return 0.0;
    if (va.cols() != vb.cols()) return kPi / 2;
    Eigen::JacobiSVD<Matrix> svd(va.adjoint() * vb);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    return std::acos(std::clamp(smin, 0.0, 1.0));
}

double subspace_inclusion_residual(const Matrix& va, const Matrix& vb) {
    if (va.cols() == 0) return 0.0;
    Matrix defect = va - vb * (vb.adjoint() * va);
    double worst = 0.0;
    for (Eigen::Index j = 0; j < defect.cols(); ++j) {
        worst = std::max(worst, defect.col(j).norm());
    }
    return worst;
}

KernelReport kernel_equality_check(const Matrix& a, double rel_tol) {
    require_square(a, "kernel_equality_check");
    Matrix va = null_space_basis(a, rel_tol);
    Matrix vb = null_space_basis(Matrix(a.adjoint()), rel_tol);
    KernelReport report;
    report.dim_a = static_cast<int>(va.cols());
    report.dim_b = static_cast<int>(vb.cols());
    report.max_principal_angle = max_principal_angle(va, vb);
    report.tol_used = rel_tol;
    report.pass = (report.dim_a == report.dim_b) && report.max_principal_angle <= 1e-8;
    return report;
}

}  // namespace qpencil
