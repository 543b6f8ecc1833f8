// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "qpencil/report.hpp"
#include "qpencil/types.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qpencil {

/// A quadratic operator pencil Q(lambda) = lambda^2 I - 2 lambda B - C.
struct PencilSpec {
    Matrix b;
    Matrix c;
};

/// Throws ShapeMismatch unless B and C are square with equal dimension.
void validate(const PencilSpec& p, const char* who);

/// Parameters of the lower-bound condition
///   Re<B^2 x, Cx> >= -alpha ||x||^2 - beta ||B^2 x||^2 - delta ||B^2 x|| ||x||.
struct ConditionC1Params {
    double alpha{0.0};  // >= 0
    double beta{0.0};   // in [0, 1)
    double delta{0.0};  // >= 0
};

/// Parameters of the relative bound ||Cx||^2 <= a ||x||^2 + b ||B^2 x||^2.
struct ConditionC2Params {
    double a{0.0};  // >= 0
    double b{0.0};  // in [0, 1)
};

enum class Convention { real_root, rotated_root };

[[nodiscard]] const char* to_string(Convention c);

/// Parses "real_root" / "rotated_root"; throws SchemaError otherwise.
[[nodiscard]] Convention convention_from_string(const std::string& name);

/// Linear factorization data for Q(lambda).
///
/// real_root:    S = principal_sqrt(Lambda),  Z1 = B + S,  Z2 = B - S.
/// rotated_root: S = principal_sqrt(-Lambda), Z1 = B + iS, Z2 = B - iS.
struct Factorization {
    Matrix lambda;  // Lambda = B^2 + C
    Matrix s;       // the computed principal root (of Lambda or of -Lambda)
    Matrix z1;
    Matrix z2;
    Convention convention{Convention::real_root};
    double commutator_norm{0.0};  // ||B S - S B||
    double lambda_margin{0.0};    // accretivity margin of Lambda
    bool defective{false};        // degenerate path: Lambda ~ 0, Z1 = Z2 = B
};

/// Checks the C.1 lower bound. delta = 0 admits an exact eigenvalue test
/// (lambda_min of Herm(C* B^2) + alpha I + beta (B^2)* B^2); delta > 0 falls
/// back to seeded unit-vector sampling plus projected-gradient refinement and
/// is reported as a sampled certificate.
[[nodiscard]] ConditionReport check_c1(const PencilSpec& p, const ConditionC1Params& params,
                                       int samples = 100000, std::uint64_t seed = 12345);

/// Logarithmic default grid for estimate_c2: 200 points spanning
/// [1e-6, 1e6] * max(1, ||B^2||).
[[nodiscard]] std::vector<double> default_t_grid(const PencilSpec& p);

struct C2Estimate {
    double b_lin{0.0};   // sup_t ||C (B^2 + tI)^{-1}|| over the grid
    double b_quad{0.0};  // b_lin^2, the constant entering the squared form
    double a_est{0.0};   // smallest a making (a, b_quad) pass the exact test
    ConditionReport report;
};

/// Estimates the relative bound of C with respect to B^2 by scanning
/// ||C (B^2 + tI)^{-1}|| over a positive t grid (extended adaptively when the
/// supremum is attained at a boundary). pass means b_quad < 1.
[[nodiscard]] C2Estimate estimate_c2(const PencilSpec& p, const std::vector<double>& t_grid);
[[nodiscard]] C2Estimate estimate_c2(const PencilSpec& p);

/// Exact eigenvalue test of ||Cx||^2 <= a ||x||^2 + b ||B^2 x||^2:
/// margin = -lambda_max(Herm(C*C - a I - b (B^2)* B^2)).
[[nodiscard]] ConditionReport check_c2_exact(const PencilSpec& p, const ConditionC2Params& params);

/// Invertibility of I + C (B^2 + t0 I)^{-1}; margin is its smallest singular
/// value.
[[nodiscard]] ConditionReport check_c3(const PencilSpec& p, double t0);

/// Accretivity of B. Domain inclusions D(B) in D(C) and boundedness of C are
/// automatic at finite dimension; the reduction is recorded in the notes.
[[nodiscard]] ConditionReport check_c4_c5(const PencilSpec& p);

/// Builds Lambda = B^2 + C and reports the accretivity margins of B^2, C and
/// Lambda. pass means the accretive-sum certificate applies: both hypothesis
/// margins and the Lambda margin are nonnegative; when a hypothesis fails the
/// report flags it and asserts nothing about Lambda.
[[nodiscard]] std::pair<Matrix, ConditionReport> build_lambda(const PencilSpec& p);

/// Factorizes Q into linear factors per the convention. Throws
/// NegativeRealEigenvalue when the root precondition fails (Lambda, resp.
/// -Lambda, has an eigenvalue on the closed negative real axis).
[[nodiscard]] Factorization factorize(const PencilSpec& p,
                                      Convention convention = Convention::real_root);

/// Degenerate pencil C = -B^2 (Lambda = 0): returns Z1 = Z2 = B with the
/// defective flag set instead of failing the root precondition. Throws
/// ConstraintViolated when Lambda is not numerically zero.
[[nodiscard]] Factorization factorize_degenerate(const PencilSpec& p);

/// Q(lambda) x = lambda^2 x - 2 lambda B x - C x.
[[nodiscard]] Vector evaluate_pencil(const PencilSpec& p, Complex lambda, const Vector& x);

/// Dense Q(lambda) = lambda^2 I - 2 lambda B - C.
[[nodiscard]] Matrix pencil_matrix(const PencilSpec& p, Complex lambda);

/// || Q(lambda) - 1/2 [(lambda-Z1)(lambda-Z2) + (lambda-Z2)(lambda-Z1)] ||.
/// An algebraic identity makes this rounding-level for factorizations with
/// Z1 + Z2 = 2B and (Z1 Z2 + Z2 Z1)/2 = -C; measured, not assumed, so callers
/// can adjudicate sign conventions empirically.
[[nodiscard]] double symmetrized_residual(const Factorization& f, const PencilSpec& p,
                                          Complex lambda);

/// || Q(lambda) - (lambda-Z1)(lambda-Z2) ||; equals ||[B, S]|| independently
/// of lambda, so it vanishes exactly when B commutes with the root.
[[nodiscard]] double ordered_residual(const Factorization& f, const PencilSpec& p,
                                      Complex lambda);

/// Numeric check that the null space of Lambda is contained in
/// N(B^2) ∩ N(C*) (principal angle below tolerance; vacuous for invertible
/// Lambda). theta is the sector half-angle hypothesis on C, recorded and
/// verified into the notes.
[[nodiscard]] ConditionReport kernel_inclusion_lambda(const PencilSpec& p, double theta);

/// Numeric check of the null-space identity N(Z1) = N(B) ∩ N(S) for the
/// real_root convention under a sectoriality hypothesis on B.
[[nodiscard]] ConditionReport kernel_identity_z1(const Factorization& f, const PencilSpec& p,
                                                 double theta);

/// Smallest r >= 0 (bisection to 1e-6 absolute) such that op + r I passes
/// sector_test(., pi/4 + eps). Throws SearchFailed when no r <= rmax works.
[[nodiscard]] double sector_shift_search(const Matrix& op, double eps, double rmax);

/// Smallest shifts r1, r2 >= 0 (bisection to 1e-6 absolute) such that
/// Z1 + r1 I and -Z2 + r2 I pass sector_test(., pi/4 + eps) — i.e. the factors
/// are sectorial with vertex -r1 (resp. -r2). Accretive B yields r1 = 0 even
/// at eps = 0 for fixtures whose factor ranges lie in the quarter sector.
/// Throws SearchFailed when no shift up to 10 (||B|| + ||S||) works.
[[nodiscard]] std::pair<double, double> factor_shift_search(const Factorization& f, double eps);

/// Eigenpairs of the pencil via the 2n x 2n companion form [[0, I], [C, 2B]];
/// eigenvectors are the (re-normalized) top blocks, sorted by eigenvalue for
/// reproducibility.
[[nodiscard]] std::vector<std::pair<Complex, Vector>> pencil_eigen(const PencilSpec& p);

/// For every pencil eigenpair (lambda = a + ib, v): checks
/// 2 (a - |b|) Re<Bv, v> <= a^2 - b^2 + tol, under the hypotheses that B is
/// quarter-sectorial and C accretive (violations are recorded into the notes).
[[nodiscard]] ConditionReport eigenvalue_localization_check(const PencilSpec& p);

}  // namespace qpencil
