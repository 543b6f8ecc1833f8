// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "qpencil/report.hpp"
#include "qpencil/types.hpp"

#include <map>
#include <mutex>
#include <vector>

namespace qpencil {

/// expm(-t T) for t >= 0.
[[nodiscard]] Matrix propagator(const Matrix& t_op, double t);

/// Append-only store of propagators expm(sign * t * generator). Safe for
/// concurrent use: lookups and inserts are serialized, results are
/// deterministic, and stored entries are never mutated, so references handed
/// out remain valid for the cache's lifetime.
class PropagatorCache {
public:
    /// sign must be +1 or -1.
    PropagatorCache(Matrix generator, int sign);

    /// Returns expm(sign * t * generator), computing and storing it on a miss.
    const Matrix& at(double t);

    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] const Matrix& generator() const { return generator_; }
    [[nodiscard]] int sign() const { return sign_; }

private:
    Matrix generator_;
    int sign_;
    mutable std::mutex mutex_;
    std::map<double, Matrix> store_;
};

/// {0.01, 0.1, 0.5, 1, 2, 10} — the default evaluation times.
[[nodiscard]] std::vector<double> default_t_samples();

/// Max over t_samples of ||expm(-t T)|| (operator 2-norm). For accretive T
/// this must not exceed 1 + 1e-12.
[[nodiscard]] double contraction_check(const Matrix& t_op, const std::vector<double>& t_samples);
[[nodiscard]] double contraction_check(const Matrix& t_op);

/// Verifies contractivity of z -> expm(-z T) on a polar grid inside the
/// holomorphy sector |arg z| <= pi/2 - psi - guard (guard 1e-3 rad), radii
/// {0.1, 1, 10}, with angle_count arguments per radius. When T fails
/// sector_test(., psi), the report carries the (negative) sector margin and
/// the note "hypothesis unmet" instead of grid results.
[[nodiscard]] ConditionReport holomorphic_sector_check(const Matrix& t_op, double psi,
                                                       int angle_count = 21);

/// Signed violation of the membership z in Omega(omega) =
/// {z : |Im sqrt(z)| <= (1 - |z|) tan(omega) / 2}; <= 0 means member. |Im
/// sqrt(z)| is branch-independent, so the principal branch decides the
/// negative real axis too.
[[nodiscard]] double omega_membership_violation(Complex z, double omega);

/// For each t in t_samples, every sampled boundary point z of the numerical
/// range of expm(-t T) (m support angles) must lie in Omega(omega) up to
/// tolerance. Reports the worst membership margin.
[[nodiscard]] ConditionReport quasi_sectorial_check(const Matrix& t_op, double omega,
                                                    const std::vector<double>& t_samples,
                                                    int m = 720);
[[nodiscard]] ConditionReport quasi_sectorial_check(const Matrix& t_op, double omega);

}  // namespace qpencil
