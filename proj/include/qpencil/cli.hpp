// SPDX-License-Identifier: Apache-2.0
//
// Command line driver. The binary in tools/ is a thin wrapper around run()
// so the subcommand handlers stay linkable from the test suite.

#pragma once

namespace qpencil::cli {

/// Parses argv and dispatches to one of the subcommands
/// (check | factorize | numrange | semigroup | solve | pde-example).
/// Returns the process exit code: 0 when every requested check passed,
/// 1 when a check failed or a numeric error was carried into the report,
/// 2 on usage or input-parse errors.
int run(int argc, const char* const* argv);

}  // namespace qpencil::cli
