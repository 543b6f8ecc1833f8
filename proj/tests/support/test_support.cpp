// SPDX-License-Identifier: Apache-2.0

#include "test_support.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>

namespace qpencil::testsupport {

double Rng::uniform() { return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

Complex Rng::gauss() {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
}

Matrix random_matrix(int n, Rng& rng) {
    Matrix a(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            a(r, c) = rng.gauss();
        }
    }
    return a;
}

Matrix random_unitary(int n, Rng& rng) {
    const Matrix g = random_matrix(n, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
        const Complex d = r(i, i);
        const double m = std::abs(d);
        q.col(i) *= (m > 0.0) ? d / m : Complex(1.0, 0.0);
    }
    return q;
}

Matrix random_hermitian_psd(int n, Rng& rng, double margin) {
    const Matrix g = random_matrix(n, rng);
    Matrix h = (g * g.adjoint()) / static_cast<double>(n);
    h += margin * Matrix::Identity(n, n);
    return (h + h.adjoint()) / 2.0;  // kill rounding asymmetry
}

Matrix random_accretive(int n, Rng& rng, double margin, double skew_scale) {
    const Matrix h = random_hermitian_psd(n, rng, margin);
    const Matrix g = random_matrix(n, rng);
    const Matrix k = (g - g.adjoint()) / 2.0;  // skew-hermitian
    return h + skew_scale * k;
}

Matrix random_sectorial(int n, Rng& rng, double half_angle, double fill, double r_min,
                        double r_max) {
    const Matrix u = random_unitary(n, rng);
    Vector d(n);
    for (int i = 0; i < n; ++i) {
        const double radius = rng.uniform(r_min, r_max);
        const double phi = rng.uniform(-fill * half_angle, fill * half_angle);
        d(i) = std::polar(radius, phi);
    }
    return u * d.asDiagonal() * u.adjoint();
}

PencilSpec random_accretive_pencil(int n, std::uint64_t seed) {
    Rng rng(seed);
    PencilSpec p;
    p.b = random_accretive(n, rng);
    p.c = random_accretive(n, rng);
    return p;
}

PencilSpec sectorial_b_pencil(int n, std::uint64_t seed) {
    Rng rng(seed);
    PencilSpec p;
    p.b = random_sectorial(n, rng, kPi / 4);
    p.c = random_accretive(n, rng);
    return p;
}

PencilSpec lambda_accretive_pencil(int n, std::uint64_t seed) {
    Rng rng(seed);
    PencilSpec p;
    p.b = random_sectorial(n, rng, kPi / 4);
    const Matrix lambda = random_accretive(n, rng, 0.5, 0.5);
    p.c = lambda - p.b * p.b;
    return p;
}

PencilSpec commuting_pencil(int n, std::uint64_t seed) {
    Rng rng(seed);
    const Matrix u = random_unitary(n, rng);
    Vector db(n);
    Vector dc(n);
    for (int i = 0; i < n; ++i) {
        db(i) = Complex(rng.uniform(0.3, 1.5), rng.uniform(-0.5, 0.5));
        dc(i) = Complex(rng.uniform(0.3, 1.5), rng.uniform(-0.5, 0.5));
    }
    PencilSpec p;
    p.b = u * db.asDiagonal() * u.adjoint();
    p.c = u * dc.asDiagonal() * u.adjoint();
    return p;
}

Matrix example_sector_matrix() {
    Matrix b(2, 2);
    b << Complex(4.0, -1.0), Complex(0.0, 4.0), Complex(0.0, 4.0), Complex(16.0, 4.0);
    return b;
}

Matrix expm_taylor(const Matrix& a) {
    const int n = static_cast<int>(a.rows());
    const double nrm = op_norm(a);
    int s = 0;
    double scaled = nrm;
    while (scaled > 0.25) {
        scaled /= 2.0;
        ++s;
        if (s > 64) throw std::runtime_error("expm_taylor: norm too large");
    }
    const Matrix b = a / std::pow(2.0, s);
    Matrix term = Matrix::Identity(n, n);
    Matrix sum = term;
    for (int k = 1; k <= 40; ++k) {
        term = (term * b) / static_cast<double>(k);
        sum += term;
        if (term.norm() < 1e-20 * sum.norm()) break;
    }
    for (int i = 0; i < s; ++i) sum = sum * sum;
    return sum;
}

Matrix sqrt_eig(const Matrix& a) {
    Eigen::ComplexEigenSolver<Matrix> es(a);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("sqrt_eig: eigendecomposition failed");
    }
    Vector d = es.eigenvalues();
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        d(i) = std::sqrt(d(i));  // principal branch
    }
    const Matrix v = es.eigenvectors();
    return v * d.asDiagonal() * v.inverse();
}

Complex scalar_bvp_exact(double x) {
    const double denom = 1.0 - std::exp(-4.0);
    return Complex((std::exp(-x) - std::exp(3.0 * x - 4.0)) / denom, 0.0);
}

std::vector<double> uniform_grid(int count) {
    std::vector<double> xs(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        xs[static_cast<std::size_t>(i)] = static_cast<double>(i) / (count - 1);
    }
    xs.front() = 0.0;
    xs.back() = 1.0;
    return xs;
}

double rel_err(const Matrix& a, const Matrix& b) {
    return op_norm(Matrix(a - b)) / std::max(1.0, op_norm(b));
}

std::string fixture_path(const std::string& name) {
    return std::string(QPENCIL_FIXTURE_DIR) + "/" + name;
}

std::string schema_path(const std::string& name) {
#ifdef QPENCIL_SCHEMA_DIR
    return std::string(QPENCIL_SCHEMA_DIR) + "/" + name;
#else
    return std::string(QPENCIL_FIXTURE_DIR) + "/../schemas/" + name;
#endif
}

}  // namespace qpencil::testsupport
