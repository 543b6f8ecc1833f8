// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "qpencil/types.hpp"

#include <cstdint>
#include <random>

namespace qpencil::detail {

/// Deterministic complex unit vectors: Box-Muller normals driven by
/// mt19937_64, normalized. The draw order is fixed, so results are
/// reproducible for a given seed and dimension.
class UnitSampler {
public:
    UnitSampler(std::uint64_t seed, Eigen::Index dim) : gen_(seed), dim_(dim) {}

    Vector next() {
        Vector x(dim_);
        for (Eigen::Index i = 0; i < dim_; ++i) {
            const double u1 = uniform01();
            const double u2 = uniform01();
            const double r = std::sqrt(-2.0 * std::log(u1));
            x(i) = Complex(r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2));
        }
        const double nrm = x.norm();
        if (nrm == 0.0) {
            x.setZero();
            x(0) = Complex(1.0, 0.0);
            return x;
        }
        return x / nrm;
    }

private:
    /// Uniform on (0, 1]: top 53 bits of the generator word, shifted off zero.
    double uniform01() { return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1p-53; }

    std::mt19937_64 gen_;
    Eigen::Index dim_;
};

}  // namespace qpencil::detail
