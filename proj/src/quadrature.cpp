// SPDX-License-Identifier: Apache-2.0
#include "qpencil/quadrature.hpp"

#include "qpencil/types.hpp"

#include <algorithm>
#include <cmath>

namespace qpencil {
namespace {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
void reference_gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double xi = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // evaluate P_n and P_n' via the three-term recurrence
            double p0 = 1.0, p1 = xi;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
            const double step = p1 / dp;
            xi -= step;
            if (std::abs(step) < 1e-15) break;
        }
        x[i] = -xi;  // initial guesses descend in xi, so nodes come out ascending
        w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
    }
}

}  // namespace

QuadratureRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw ShapeMismatch("gauss_legendre: need n >= 1");
    if (!(b > a)) throw ShapeMismatch("gauss_legendre: need b > a");
    std::vector<double> x, w;
    reference_gauss_legendre(n, x, w);
    QuadratureRule rule;
    rule.declared_degree = 2 * n - 1;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = mid + half * x[i];
        rule.weights[i] = half * w[i];
    }
    return rule;
}

QuadratureRule composite_gauss_legendre(const std::vector<double>& edges, int points_per_panel) {
    if (edges.size() < 2) throw ShapeMismatch("composite_gauss_legendre: need >= 2 edges");
    QuadratureRule rule;
    rule.declared_degree = 2 * points_per_panel - 1;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        if (!(edges[p + 1] > edges[p])) {
            throw ShapeMismatch("composite_gauss_legendre: edges must increase strictly");
        }
        QuadratureRule panel = gauss_legendre(points_per_panel, edges[p], edges[p + 1]);
        rule.nodes.insert(rule.nodes.end(), panel.nodes.begin(), panel.nodes.end());
        rule.weights.insert(rule.weights.end(), panel.weights.begin(), panel.weights.end());
    }
    return rule;
}

QuadratureRule balakrishnan_rule(double alpha, int total_nodes) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ShapeMismatch("balakrishnan_rule: need alpha in (0, 1)");
    }
    if (total_nodes < 30) throw ShapeMismatch("balakrishnan_rule: need >= 30 nodes");

    const int per_panel = 10;
    const int n_panels = std::max(3, total_nodes / per_panel);
    const double left_edge = 0.1;
    const double right_edge = 0.9;

    std::vector<double> x, w;
    reference_gauss_legendre(per_panel, x, w);

    QuadratureRule rule;
    rule.declared_degree = 2 * per_panel - 1;
    rule.domain = "semi-infinite-transformed";
    auto push = [&rule](double node, double weight) {
        rule.nodes.push_back(node);
        rule.weights.push_back(weight);
    };

    // First panel [0, left_edge]: t = left_edge * sigma^m removes the t^(alpha-1)
    // endpoint singularity (m*alpha - 1 >= 1 keeps the mapped integrand smooth).
    {
        const int m = std::max(2, static_cast<int>(std::ceil(2.0 / alpha)));
        for (int i = 0; i < per_panel; ++i) {
            const double sigma = 0.5 * (x[i] + 1.0);
            const double dsigma = 0.5 * w[i];
            const double t = left_edge * std::pow(sigma, m);
            push(t, dsigma * left_edge * m * std::pow(sigma, m - 1));
        }
    }
    // Interior panels: plain Gauss-Legendre.
    {
        const int interior = n_panels - 2;
        const double h = (right_edge - left_edge) / interior;
        for (int p = 0; p < interior; ++p) {
            const double a = left_edge + p * h;
            for (int i = 0; i < per_panel; ++i) {
                push(a + h * 0.5 * (x[i] + 1.0), 0.5 * h * w[i]);
            }
        }
    }
    // Last panel [right_edge, 1]: t = 1 - (1 - right_edge) * sigma^m removes the
    // (1-t)^(-alpha) singularity introduced by the lambda = t/(1-t) substitution.
    {
        const int m = std::max(2, static_cast<int>(std::ceil(2.0 / (1.0 - alpha))));
        const double width = 1.0 - right_edge;
        for (int i = per_panel - 1; i >= 0; --i) {
            const double sigma = 0.5 * (x[i] + 1.0);
            const double dsigma = 0.5 * w[i];
            const double t = 1.0 - width * std::pow(sigma, m);
            push(t, dsigma * width * m * std::pow(sigma, m - 1));
        }
    }
    return rule;
}

}  // namespace qpencil
