// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace qpencil {

/// Outcome of one condition / hypothesis check. Shared by the condition
/// checkers, the semigroup verifications and the discretized example.
struct ConditionReport {
    std::string condition;  // e.g. "C1", "C2", "C3", "C4C5", "Lambda"
    bool pass{false};
    double margin{0.0};
    std::string mode{"exact"};  // "exact" or "sampled"
    std::map<std::string, double> parameters;
    int samples{0};
    std::uint64_t seed{0};
    std::string notes;  // finite-dimension reductions, precondition warnings
};

}  // namespace qpencil
