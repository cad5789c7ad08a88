// SPDX-License-Identifier: Apache-2.0
//
// owsim — indoor optical wireless uplink simulator
// Copyright (c) 2026 owsim contributors

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "owsim/scene.hpp"
#include "owsim/vec3.hpp"

namespace owsim::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_input_error = 2;
inline constexpr int exit_acquisition_failed = 3;

enum class Mode { unsteered, steered };

// One line of the transmitter-sweep table.
struct SweepRow {
    double tx_x_m = 0.0;
    double tx_y_m = 0.0;
    Mode mode = Mode::unsteered;
    int best_unit = 0;
    int best_branch = 0;
    double power_w = 0.0;
    double delay_spread_s = 0.0;
    double snr_db = 0.0;
    double ber = 0.5;
    int iterations = 0;  // steered only
};

// Best-branch metrics at every requested position and mode. Rows are ordered
// by (y ascending, unsteered before steered); positions evaluate concurrently
// but the output order never depends on scheduling.
std::vector<SweepRow> sweep_rows(const Scenario& scenario, double x_m,
                                 const std::vector<double>& y_list_m, bool unsteered,
                                 bool steered, int max_order);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

// Subcommand bodies; each writes its CSV product to `out`.
int cmd_simulate(const Scenario& scenario, const Vec3& tx_pos, Mode mode, int max_order,
                 std::ostream& out);
int cmd_sweep(const Scenario& scenario, double x_m, const std::vector<double>& y_list_m,
              bool unsteered, bool steered, int max_order, std::ostream& out);
int cmd_steer(const Scenario& scenario, const Vec3& tx_pos, const std::string& log_path,
              std::ostream& out);
int cmd_ir(const Scenario& scenario, const Vec3& tx_pos, Mode mode, int max_order,
           std::ostream& out);

// Argument parsing plus error-to-exit-code mapping: 0 success, 2 invalid
// input or scenario, 3 acquisition failure.
int run(int argc, const char* const* argv);

}  // namespace owsim::cli
