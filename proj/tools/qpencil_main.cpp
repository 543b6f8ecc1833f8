// SPDX-License-Identifier: Apache-2.0

#include "qpencil/cli.hpp"

int main(int argc, char** argv) { return qpencil::cli::run(argc, argv); }
