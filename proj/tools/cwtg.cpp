// Copyright 2026 The cwtg Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "cwtg/cli.hpp"

int main(int argc, char** argv) { return cwtg::cli::run(argc, argv, std::cout, std::cerr); }
