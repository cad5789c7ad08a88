// SPDX-License-Identifier: Apache-2.0
//
// owsim — indoor optical wireless uplink simulator
// Copyright (c) 2026 owsim contributors

#include "cli.hpp"

int main(int argc, char** argv) { return owsim::cli::run(argc, argv); }
