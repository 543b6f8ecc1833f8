// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "qpencil/types.hpp"

#include <utility>
#include <vector>

namespace qpencil {

/// Closed sector S(omega) = { z : |arg(z - vertex)| <= half_angle }.
struct Sector {
    Complex vertex{0.0, 0.0};
    double half_angle{kPi / 2};
};

/// Support-function sampling of the numerical range W(A).
///
/// For each angle theta the support value is h(theta) = lambda_max of the
/// Hermitian part of e^{-i theta} A; the boundary point is <A x, x> for the
/// corresponding top eigenvector x (stored column-wise in `witnesses`).
struct NumericalRangeSample {
    std::vector<double> angles;
    std::vector<double> support_values;
    std::vector<Complex> boundary_points;
    Matrix witnesses;  // n x m, column k is the unit witness for angles[k]
};

struct SectorReport {
    bool pass{false};
    double margin{0.0};        // min of the two rotated accretivity margins
    double margin_plus{0.0};   // margin of e^{+i phi}(A - vertex I)
    double margin_minus{0.0};  // margin of e^{-i phi}(A - vertex I)
    Sector sector;
};

struct InclusionReport {
    bool pass{false};
    double worst_violation{0.0};  // max over eigenvalues of support-constraint excess
    std::vector<Complex> eigenvalues;
    int samples{0};
};

struct KernelReport {
    bool pass{false};
    int dim_a{0};
    int dim_b{0};
    double max_principal_angle{0.0};  // radians; 0 when both kernels are trivial
    double tol_used{0.0};
};

/// Splits A into Hermitian part H = (A + A*)/2 and skew part K = A - H.
/// The reconstruction H + K == A is exact in floating point.
[[nodiscard]] std::pair<Matrix, Matrix> hermitian_split(const Matrix& a);

/// lambda_min of the Hermitian part of A. A is accretive iff the value is >= 0.
/// In finite dimension accretive and m-accretive coincide (the range condition
/// is automatic); reports record that reduction as metadata.
[[nodiscard]] double accretivity_margin(const Matrix& a);

/// Support-function sampling of W(A) at m equispaced angles (m >= 3).
[[nodiscard]] NumericalRangeSample numerical_range(const Matrix& a, int m = 720);

/// Largest violation of the sampled support constraints by the point z:
/// max_k [ Re(e^{-i theta_k} z) - h(theta_k) ]. Non-positive means z lies in
/// the sampled outer approximation of W(A).
[[nodiscard]] double support_violation(const NumericalRangeSample& sample, Complex z);

/// Tests W(A - vertex I) against the closed sector of the given half-angle via
/// the two rotated accretivity margins at phi = pi/2 - half_angle.
[[nodiscard]] SectorReport sector_test(const Matrix& a, const Sector& s);

/// (lambda I - A)^{-1}. Throws SingularResolvent when lambda is numerically in
/// the spectrum (smallest singular value below 1e-13 * ||lambda I - A||).
[[nodiscard]] Matrix resolvent(const Matrix& a, Complex lambda);

/// Checks that every eigenvalue of A lies inside the support-function
/// intersection of numerical_range(A, m) up to 1e-10 * (1 + ||A||).
[[nodiscard]] InclusionReport spectral_inclusion_check(const Matrix& a, int m = 720);

/// Orthonormal basis of the numeric null space: right singular vectors whose
/// singular values are <= rel_tol * sigma_max (rank decision is scale invariant).
[[nodiscard]] Matrix null_space_basis(const Matrix& a, double rel_tol = 1e-10);

/// Checks N(A) = N(A*) (valid for accretive A). Returns dimensions and the
/// largest principal angle between the two numeric null spaces.
[[nodiscard]] KernelReport kernel_equality_check(const Matrix& a, double rel_tol = 1e-10);

/// Largest principal angle between the column spans of two orthonormal bases
/// with an equal number of columns; 0 for two empty bases.
[[nodiscard]] double max_principal_angle(const Matrix& va, const Matrix& vb);

/// max over columns v of ||v - P_b v|| where P_b projects onto span(vb):
/// 0 iff span(va) is contained in span(vb). Bases must be orthonormal.
[[nodiscard]] double subspace_inclusion_residual(const Matrix& va, const Matrix& vb);

}  // namespace qpencil
