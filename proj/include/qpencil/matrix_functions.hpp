// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "qpencil/quadrature.hpp"
#include "qpencil/types.hpp"

#include <cstdint>

namespace qpencil {

enum class SqrtMethod { schur, denman_beavers };

struct SqrtOptions {
    SqrtMethod method{SqrtMethod::schur};
    int max_iterations{60};     // iterative path only
    double residual_tol{1e-10};  // relative ||S^2 - A|| / ||A|| accepted
};

/// Principal matrix square root: the unique S with S^2 = A and spectrum in the
/// open right half-plane. Requires that no eigenvalue of A lies on (-inf, 0].
///
/// The default path runs the triangular recurrence on the complex Schur form;
/// the iterative path is a determinant-scaled Denman-Beavers iteration kept as
/// an independent cross-check.
[[nodiscard]] Matrix principal_sqrt(const Matrix& a, const SqrtOptions& opts = {});

/// Matrix exponential by Pade approximation with scaling and squaring.
/// Throws OverflowError when the input norm is so extreme that the scaled
/// evaluation cannot produce finite entries.
[[nodiscard]] Matrix expm(const Matrix& a);

/// Fractional power T^alpha, alpha in (0,1), of an accretive invertible T via
/// the integral representation
///     T^alpha = (sin(pi alpha) / pi) * Int_0^inf lambda^(alpha-1) T (lambda I + T)^(-1) dlambda
/// discretized on [0,1] through lambda = t/(1-t) with the supplied rule
/// (see balakrishnan_rule). Node solves follow resolvent singularity semantics.
[[nodiscard]] Matrix balakrishnan_power(const Matrix& t, double alpha, const QuadratureRule& rule);
[[nodiscard]] Matrix balakrishnan_power(const Matrix& t, double alpha);

struct SlackReport {
    double worst_slack{0.0};
    int samples{0};
    std::uint64_t seed{0};
};

struct MomentReport {
    double worst_slack{0.0};   // min over unit x of ||x|| ||Tx|| - ||T^(1/2) x||^2
    double max_ratio{0.0};     // max over unit x of ||T^(1/2) x||^2 / (||Tx|| ||x||)
    int samples{0};
    std::uint64_t seed{0};
};

/// Sampled check of the square inequality for accretive B:
///     ||Bx||^2 <= nu ||x||^2 + (1/nu) ||B^2 x||^2   for every nu > 0.
/// Returns the smallest sampled slack (negative = violation found).
[[nodiscard]] SlackReport kato_square_inequality_check(const Matrix& b, double nu, int samples,
                                                       std::uint64_t seed);

/// Sampled measurement of the moment bound ||T^(1/2) x||^2 <= ||Tx|| ||x||
/// for accretive invertible T. Constant one is a theorem for selfadjoint T
/// (where ||T^(1/2)x||^2 = <Tx, x>); for general accretive T the attained
/// constant can exceed one slightly, so max_ratio reports it rather than
/// asserting it.
[[nodiscard]] MomentReport moment_inequality_check(const Matrix& t, int samples,
                                                   std::uint64_t seed);

}  // namespace qpencil
