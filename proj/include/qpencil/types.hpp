// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace qpencil {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input dimensions are inconsistent (non-square operator, mismatched sizes, ...).
class ShapeMismatch : public Error {
public:
    using Error::Error;
};

/// A linear system (lambda*I - A)x = b is numerically singular.
class SingularResolvent : public Error {
public:
    SingularResolvent(const std::string& what, double smallest_singular_value)
        : Error(what), smallest_singular_value(smallest_singular_value) {}
    double smallest_singular_value;
};

/// The principal matrix square root does not exist: an eigenvalue sits on (-inf, 0].
class NegativeRealEigenvalue : public Error {
public:
    NegativeRealEigenvalue(const std::string& what, Complex eigenvalue)
        : Error(what), eigenvalue(eigenvalue) {}
    Complex eigenvalue;
};

/// An iteration failed to reach its tolerance within the iteration cap.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, int iterations, double residual)
        : Error(what), iterations(iterations), residual(residual) {}
    int iterations;
    double residual;
};

/// A matrix-function evaluation produced non-finite entries.
class OverflowError : public Error {
public:
    OverflowError(const std::string& what, double input_norm, int squarings)
        : Error(what), input_norm(input_norm), squarings(squarings) {}
    double input_norm;
    int squarings;
};

/// A bracketed parameter search exhausted its admissible interval.
class SearchFailed : public Error {
public:
    using Error::Error;
};

/// A validated configuration constraint does not hold for the supplied data.
class ConstraintViolated : public Error {
public:
    using Error::Error;
};

/// A linear system required by a solver is singular (boundary map, factor, ...).
class SingularSystem : public Error {
public:
    using Error::Error;
};

/// A JSON/CSV document does not match the published schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Throws ShapeMismatch unless `a` is square with dimension >= 1.
void require_square(const Matrix& a, const char* who);

/// Throws ShapeMismatch unless `a` and `b` are square with equal dimension.
void require_same_square(const Matrix& a, const Matrix& b, const char* who);

/// Operator 2-norm (largest singular value).
[[nodiscard]] double op_norm(const Matrix& a);

}  // namespace qpencil
