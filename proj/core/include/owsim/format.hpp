// SPDX-License-Identifier: Apache-2.0
//
// owsim — indoor optical wireless uplink simulator
// Copyright (c) 2026 owsim contributors

#pragma once

#include <cstdio>
#include <string>

namespace owsim {

// Shortest round-trip decimal form used by every CSV writer (17 significant
// digits, bit-stable across runs).
inline std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

}  // namespace owsim
