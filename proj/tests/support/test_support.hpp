// SPDX-License-Identifier: Apache-2.0
//
// Shared fixture generators and independent numerical oracles for the test
// suite. Everything here is deterministic in the seed, and the oracles use
// different algorithms than the library under test (Taylor series with
// scaling for the exponential, eigendecomposition for the square root) so
// agreement is meaningful.

#pragma once

#include "qpencil/pencil.hpp"
#include "qpencil/types.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace qpencil::testsupport {

/// Deterministic stream of scalars/matrices for fixture construction.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform on (0, 1].
    double uniform();
    /// Uniform on [lo, hi].
    double uniform(double lo, double hi);
    /// Standard complex normal (real and imaginary parts N(0, 1/sqrt(2))).
    Complex gauss();

private:
    std::mt19937_64 gen_;
};

/// Dense matrix with i.i.d. complex normal entries.
[[nodiscard]] Matrix random_matrix(int n, Rng& rng);

/// Haar-ish unitary: QR of a Gaussian matrix with the phase convention that
/// makes R's diagonal real positive.
[[nodiscard]] Matrix random_unitary(int n, Rng& rng);

/// Hermitian matrix with eigenvalues >= margin.
[[nodiscard]] Matrix random_hermitian_psd(int n, Rng& rng, double margin = 0.5);

/// Accretive matrix: hermitian part has eigenvalues >= margin, plus a
/// skew-hermitian part of the given scale.
[[nodiscard]] Matrix random_accretive(int n, Rng& rng, double margin = 0.5,
                                      double skew_scale = 0.5);

/// Normal matrix whose spectrum (= closed numerical range, up to convex
/// hull) sits inside the sector |arg z| <= fill * half_angle with moduli in
/// [r_min, r_max].
[[nodiscard]] Matrix random_sectorial(int n, Rng& rng, double half_angle,
                                      double fill = 0.9, double r_min = 0.2,
                                      double r_max = 2.0);

/// Pencil with both coefficients accretive.
[[nodiscard]] PencilSpec random_accretive_pencil(int n, std::uint64_t seed);

/// Pencil with B sectorial of half-angle pi/4 (normal) and C accretive.
[[nodiscard]] PencilSpec sectorial_b_pencil(int n, std::uint64_t seed);

/// Pencil built so that B is pi/4-sectorial normal and B^2 + C is accretive
/// with hermitian-part margin >= 0.5 (C is defined as the difference).
[[nodiscard]] PencilSpec lambda_accretive_pencil(int n, std::uint64_t seed);

/// Commuting pencil: B and C share a unitary eigenbasis, with eigenvalues
/// placed so B^2 + C stays away from the branch cut (-inf, 0].
[[nodiscard]] PencilSpec commuting_pencil(int n, std::uint64_t seed);

/// The 2x2 sector demonstration matrix [[4-i, 4i], [4i, 16+4i]].
[[nodiscard]] Matrix example_sector_matrix();

/// Exponential oracle: scaling + plain Taylor summation to machine
/// precision. Independent of the Pade implementation in the library.
[[nodiscard]] Matrix expm_taylor(const Matrix& a);

/// Square-root oracle via diagonalization (principal branch on the
/// eigenvalues). Only trustworthy for well-conditioned eigenbases.
[[nodiscard]] Matrix sqrt_eig(const Matrix& a);

/// Exact solution of u'' - 2u' - 3u = 0, u(0) = 1, u(1) = 0:
/// u(x) = (e^{-x} - e^{3x-4}) / (1 - e^{-4}).
[[nodiscard]] Complex scalar_bvp_exact(double x);

/// count uniformly spaced nodes covering [0, 1] with exact endpoints.
[[nodiscard]] std::vector<double> uniform_grid(int count);

/// Relative difference ||a - b|| / max(1, ||b||) in the operator norm.
[[nodiscard]] double rel_err(const Matrix& a, const Matrix& b);

/// Paths injected by the build for data files.
[[nodiscard]] std::string fixture_path(const std::string& name);
[[nodiscard]] std::string schema_path(const std::string& name);

}  // namespace qpencil::testsupport
