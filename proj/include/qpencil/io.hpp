// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "qpencil/bvp.hpp"
#include "qpencil/operator_core.hpp"
#include "qpencil/pde_example.hpp"
#include "qpencil/pencil.hpp"
#include "qpencil/quadrature.hpp"
#include "qpencil/report.hpp"
#include "qpencil/types.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace qpencil::io {

using json = nlohmann::json;

/// Loads and parses a JSON file; throws SchemaError with the path and parser
/// context on failure.
[[nodiscard]] json load_json_file(const std::string& path);

/// Serializes with sorted keys, two-space indent, and a trailing newline —
/// byte-identical across runs for identical content.
[[nodiscard]] std::string dump_report(const json& j);

void write_text_file(const std::string& path, const std::string& content);

// Complex scalars and vectors: [re, im] pairs.
[[nodiscard]] json complex_to_json(Complex z);
[[nodiscard]] Complex complex_from_json(const json& j, const char* who);
[[nodiscard]] json vector_to_json(const Vector& v);
[[nodiscard]] Vector vector_from_json(const json& j, const char* who);

// Operator files: {"dim": n, "entries": row-major n x n of [re, im]}.
[[nodiscard]] json operator_to_json(const Matrix& a);
[[nodiscard]] Matrix operator_from_json(const json& j, const char* who);

// PencilSpec: {"B": <operator>, "C": <operator>}.
[[nodiscard]] json pencil_to_json(const PencilSpec& p);
[[nodiscard]] PencilSpec pencil_from_json(const json& j, const char* who);

// QuadratureRule: {"nodes": [...], "weights": [...]} (+ domain, degree).
[[nodiscard]] json rule_to_json(const QuadratureRule& r);
[[nodiscard]] QuadratureRule rule_from_json(const json& j, const char* who);

// ConditionReport: {"condition", "pass", "margin", "mode", "samples", "seed"}
// plus parameters/notes.
[[nodiscard]] json condition_report_to_json(const ConditionReport& r);

// BvpProblem: {"pencil": {...}, "u0": [[re,im],...], "u1": [...],
//              "f": {"x": [...], "values": [[[re,im],...], ...]},
//              "x_grid": [...], "p": 2.0}.
[[nodiscard]] json bvp_problem_to_json(const BvpProblem& prob);
[[nodiscard]] BvpProblem bvp_problem_from_json(const json& j, const char* who);

// Solution report: residuals, compatibility norms, convention and sign flags.
[[nodiscard]] json bvp_solution_to_json(const BvpSolution& sol);

// PdeCoefficients: {"p0": {"type": "poly"|"samples", ...}, "p1": {...},
//                   "alpha", "beta": [re,im], "r", "epsilon", "n_y"}.
[[nodiscard]] json coefficients_to_json(const PdeCoefficients& c);
[[nodiscard]] PdeCoefficients coefficients_from_json(const json& j, const char* who);

[[nodiscard]] json claim_to_json(const ClaimReport& cr);
[[nodiscard]] json adjudication_to_json(const PencilAdjudication& adj);
[[nodiscard]] json sector_report_to_json(const SectorReport& rep);

// CSV writers (deterministic shortest-round-trip doubles).
void write_solution_csv(std::ostream& os, const BvpSolution& sol);
void write_solution_2d_csv(std::ostream& os, const BvpSolution& sol,
                           const std::vector<double>& y_interior);
void write_numrange_csv(std::ostream& os, const NumericalRangeSample& sample);

/// Structural validation of an emitted report against the published schema
/// kind ("condition_report", "bvp_solution", "claim", "operator", ...).
/// Throws SchemaError on mismatch.
void validate_report_json(const json& j, const std::string& kind);

}  // namespace qpencil::io
