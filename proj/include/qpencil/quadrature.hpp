// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace qpencil {

/// Nodes and weights of a quadrature rule on a tagged domain.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::string domain{"[0,1]"};  // "[0,1]" or "semi-infinite-transformed"
    int declared_degree{0};       // polynomial exactness of each panel rule
};

/// n-point Gauss-Legendre rule on [a, b].
[[nodiscard]] QuadratureRule gauss_legendre(int n, double a = 0.0, double b = 1.0);

/// Composite Gauss-Legendre rule with the given strictly increasing panel
/// edges and a fixed point count per panel.
[[nodiscard]] QuadratureRule composite_gauss_legendre(const std::vector<double>& edges,
                                                      int points_per_panel);

/// Rule on t in (0,1) for integrands of the form t^(alpha-1) (1-t)^(-alpha) g(t)
/// with smooth g, as produced by the substitution lambda = t/(1-t) in the
/// fractional-power integral. Interior panels are plain Gauss-Legendre; the
/// first and last panels are power-graded so the endpoint singularities are
/// integrated to rule accuracy.
[[nodiscard]] QuadratureRule balakrishnan_rule(double alpha, int total_nodes = 200);

}  // namespace qpencil
