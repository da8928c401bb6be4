// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "turbomor_cli/cli.hpp"

int main(int argc, char** argv) { return turbomor::cli::run(argc, argv, std::cout, std::cerr); }
