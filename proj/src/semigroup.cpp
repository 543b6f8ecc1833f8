// SPDX-License-Identifier: Apache-2.0
#include "qpencil/semigroup.hpp"

#include "qpencil/matrix_functions.hpp"
#include "qpencil/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

namespace qpencil {

Matrix propagator(const Matrix& t_op, double t) {
    require_square(t_op, "propagator");
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw ConstraintViolated("propagator: time must be a finite nonnegative real");
    }
    return expm(Matrix(-t * t_op));
}

PropagatorCache::PropagatorCache(Matrix generator, int sign)
    : generator_(std::move(generator)), sign_(sign) {
    require_square(generator_, "PropagatorCache");
    if (sign_ != 1 && sign_ != -1) {
        throw ConstraintViolated("PropagatorCache: sign must be +1 or -1");
    }
}

const Matrix& PropagatorCache::at(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw ConstraintViolated("PropagatorCache: time must be a finite nonnegative real");
    }
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = store_.find(t);
    if (it == store_.end()) {
        it = store_.emplace(t, expm(Matrix(static_cast<double>(sign_) * t * generator_))).first;
    }
    return it->second;
}

std::size_t PropagatorCache::size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return store_.size();
}

std::vector<double> default_t_samples() { return {0.01, 0.1, 0.5, 1.0, 2.0, 10.0}; }

double contraction_check(const Matrix& t_op, const std::vector<double>& t_samples) {
    require_square(t_op, "contraction_check");
    if (t_samples.empty()) {
        throw ConstraintViolated("contraction_check: need at least one sample time");
    }
    double worst = -std::numeric_limits<double>::infinity();
    for (double t : t_samples) {
        worst = std::max(worst, op_norm(propagator(t_op, t)));
    }
    return worst;
}

double contraction_check(const Matrix& t_op) {
    return contraction_check(t_op, default_t_samples());
}

ConditionReport holomorphic_sector_check(const Matrix& t_op, double psi, int angle_count) {
    require_square(t_op, "holomorphic_sector_check");
    if (!(psi >= 0.0 && psi <= kPi / 2)) {
        throw ConstraintViolated("holomorphic_sector_check: psi must lie in [0, pi/2]");
    }
    if (angle_count < 1) {
        throw ConstraintViolated("holomorphic_sector_check: need at least one angle");
    }
    constexpr double kGuard = 1e-3;  // stay off the sector boundary, where equality holds
    ConditionReport rep;
    rep.condition = "HolomorphicSector";
    rep.mode = "sampled";
    rep.parameters["psi"] = psi;
    rep.parameters["guard"] = kGuard;

    const SectorReport sector = sector_test(t_op, Sector{Complex(0.0, 0.0), psi});
    if (!sector.pass) {
        rep.margin = sector.margin;
        rep.pass = false;
        rep.notes = "hypothesis unmet: sector_test fails at psi, contraction grid not asserted";
        return rep;
    }

    const double max_arg = std::max(0.0, kPi / 2 - psi - kGuard);
    const std::vector<double> radii{0.1, 1.0, 10.0};
    double worst = -std::numeric_limits<double>::infinity();
    int evaluated = 0;
    for (double r : radii) {
        for (int k = 0; k < angle_count; ++k) {
            const double arg =
                angle_count == 1 ? 0.0 : -max_arg + 2.0 * max_arg * k / (angle_count - 1);
            const Complex z = std::polar(r, arg);
            worst = std::max(worst, op_norm(expm(Matrix(-z * t_op))));
            ++evaluated;
        }
    }
    rep.samples = evaluated;
    rep.parameters["worst_norm"] = worst;
    rep.margin = 1.0 - worst;
    rep.pass = worst <= 1.0 + 1e-10;
    std::ostringstream os;
    os << "||expm(-zT)|| on radii {0.1, 1, 10} x " << angle_count
       << " arguments inside |arg z| <= pi/2 - psi - guard";
    rep.notes = os.str();
    return rep;
}

double omega_membership_violation(Complex z, double omega) {
    // |Im sqrt(z)| is the same for both square-root branches, so the
    // principal branch covers the negative real axis as well.
    const double im_root = std::abs(std::sqrt(z).imag());
    return im_root - 0.5 * (1.0 - std::abs(z)) * std::tan(omega);
}

ConditionReport quasi_sectorial_check(const Matrix& t_op, double omega,
                                      const std::vector<double>& t_samples, int m) {
    require_square(t_op, "quasi_sectorial_check");
    if (!(omega >= 0.0 && omega < kPi / 2)) {
        throw ConstraintViolated("quasi_sectorial_check: omega must lie in [0, pi/2)");
    }
    if (t_samples.empty()) {
        throw ConstraintViolated("quasi_sectorial_check: need at least one sample time");
    }
    ConditionReport rep;
    rep.condition = "QuasiSectorial";
    rep.mode = "sampled";
    rep.parameters["omega"] = omega;
    rep.parameters["support_angles"] = static_cast<double>(m);

    const SectorReport sector = sector_test(t_op, Sector{Complex(0.0, 0.0), omega});
    if (!sector.pass) {
        rep.margin = sector.margin;
        rep.pass = false;
        rep.notes = "hypothesis unmet: sector_test fails at omega, membership not asserted";
        return rep;
    }

    double worst_violation = -std::numeric_limits<double>::infinity();
    double max_abs = 0.0;
    int points = 0;
    for (double t : t_samples) {
        const Matrix e = propagator(t_op, t);
        const NumericalRangeSample range = numerical_range(e, m);
        for (const Complex z : range.boundary_points) {
            worst_violation = std::max(worst_violation, omega_membership_violation(z, omega));
            max_abs = std::max(max_abs, std::abs(z));
            ++points;
        }
    }
    rep.samples = points;
    const double tol = 1e-9 * (1.0 + max_abs);
    rep.parameters["tol"] = tol;
    rep.margin = -worst_violation;
    rep.pass = worst_violation <= tol;
    rep.notes =
        "sampled numerical-range boundary of expm(-tT) against |Im sqrt(z)| <= "
        "(1-|z|) tan(omega)/2";
    return rep;
}

ConditionReport quasi_sectorial_check(const Matrix& t_op, double omega) {
    return quasi_sectorial_check(t_op, omega, default_t_samples());
}

}  // namespace qpencil
