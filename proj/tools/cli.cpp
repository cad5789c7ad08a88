// SPDX-License-Identifier: Apache-2.0
//
// owsim — indoor optical wireless uplink simulator
// Copyright (c) 2026 owsim contributors

#include "cli.hpp"

#include <exception>
#include <fstream>
#include <future>
#include <iostream>
#include <semaphore>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>

#include "owsim/format.hpp"
#include "owsim/metrics.hpp"
#include "owsim/raytrace.hpp"
#include "owsim/steering.hpp"

namespace owsim::cli {

namespace {

SweepRow make_row(const Scenario& scenario, double x, double y, Mode mode,
                  const LinkMetrics& lm, int iterations) {
    SweepRow row;
    row.tx_x_m = x;
    row.tx_y_m = y;
    row.mode = mode;
    row.best_branch = lm.best_branch_id;
    row.best_unit = scenario.unit_of_branch(lm.best_branch_id);
    const BranchMetrics& m = lm.branches.at(static_cast<std::size_t>(lm.best_branch_id));
    row.power_w = m.power_w;
    row.delay_spread_s = m.delay_spread_s;
    row.snr_db = m.snr_db;
    row.ber = m.ber;
    row.iterations = iterations;
    return row;
}

SweepRow compute_row(const Scenario& scenario, double x, double y, Mode mode, int max_order) {
    const Vec3 tx{x, y, scenario.room.comm_floor_height_m};
    if (mode == Mode::unsteered) {
        const ImpulseResponse ir = trace_unsteered(scenario, tx, max_order);
        return make_row(scenario, x, y, mode, link_metrics(ir, scenario), 0);
    }
    const SteeringResult res = run_acquisition(scenario, tx);
    if (max_order == 2) {
        return make_row(scenario, x, y, mode, res.final_metrics, res.iterations);
    }
    const ImpulseResponse ir = steered_trace(scenario, tx, res.target,
                                             scenario.steering.steered_divergence_deg, max_order);
    return make_row(scenario, x, y, mode, link_metrics(ir, scenario), res.iterations);
}

const char* mode_name(Mode mode) { return mode == Mode::unsteered ? "unsteered" : "steered"; }

}  // namespace

std::vector<SweepRow> sweep_rows(const Scenario& scenario, double x_m,
                                 const std::vector<double>& y_list_m, bool unsteered,
                                 bool steered, int max_order) {
    std::vector<std::pair<double, Mode>> jobs;
    for (double y : y_list_m) {
        if (unsteered) jobs.emplace_back(y, Mode::unsteered);
        if (steered) jobs.emplace_back(y, Mode::steered);
    }
    // Bounded fan-out keeps peak memory at two traces in flight.
    const unsigned hw = std::thread::hardware_concurrency();
    static std::counting_semaphore<2> slots(static_cast<std::ptrdiff_t>(
        hw >= 2 ? 2 : 1));
    std::vector<std::future<SweepRow>> futures;
    futures.reserve(jobs.size());
    for (const auto& [y, mode] : jobs) {
        futures.push_back(std::async(std::launch::async, [&scenario, x_m, y = y, mode = mode,
                                                          max_order]() {
            slots.acquire();
            try {
                SweepRow row = compute_row(scenario, x_m, y, mode, max_order);
                slots.release();
                return row;
            } catch (...) {
                slots.release();
                throw;
            }
        }));
    }
    std::vector<SweepRow> rows;
    rows.reserve(futures.size());
    for (auto& f : futures) rows.push_back(f.get());
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "tx_x_m,tx_y_m,mode,best_unit,best_branch,power_w,delay_spread_s,snr_db,ber,"
           "iterations\n";
    for (const SweepRow& r : rows) {
        out << format_double(r.tx_x_m) << ',' << format_double(r.tx_y_m) << ','
            << mode_name(r.mode) << ',' << r.best_unit << ',' << r.best_branch << ','
            << format_double(r.power_w) << ',' << format_double(r.delay_spread_s) << ','
            << format_double(r.snr_db) << ',' << format_double(r.ber) << ',' << r.iterations
            << '\n';
    }
}

int cmd_simulate(const Scenario& scenario, const Vec3& tx_pos, Mode mode, int max_order,
                 std::ostream& out) {
    if (mode == Mode::unsteered) {
        const ImpulseResponse ir = trace_unsteered(scenario, tx_pos, max_order);
        write_metrics_csv(out, link_metrics(ir, scenario), scenario);
        return exit_ok;
    }
    const SteeringResult res = run_acquisition(scenario, tx_pos);
    if (max_order == 2) {
        write_metrics_csv(out, res.final_metrics, scenario);
    } else {
        const ImpulseResponse ir = steered_trace(
            scenario, tx_pos, res.target, scenario.steering.steered_divergence_deg, max_order);
        write_metrics_csv(out, link_metrics(ir, scenario), scenario);
    }
    return exit_ok;
}

int cmd_sweep(const Scenario& scenario, double x_m, const std::vector<double>& y_list_m,
              bool unsteered, bool steered, int max_order, std::ostream& out) {
    write_sweep_csv(out, sweep_rows(scenario, x_m, y_list_m, unsteered, steered, max_order));
    return exit_ok;
}

int cmd_steer(const Scenario& scenario, const Vec3& tx_pos, const std::string& log_path,
              std::ostream& out) {
    const SteeringResult res = run_acquisition(scenario, tx_pos);
    if (!log_path.empty()) {
        std::ofstream log(log_path, std::ios::binary);
        if (!log) throw ScenarioError("cannot open log file '" + log_path + "'");
        write_acquisition_log(log, res.events);
    }
    write_metrics_csv(out, res.final_metrics, scenario);
    return exit_ok;
}

int cmd_ir(const Scenario& scenario, const Vec3& tx_pos, Mode mode, int max_order,
           std::ostream& out) {
    if (mode == Mode::unsteered) {
        write_impulse_csv(out, trace_unsteered(scenario, tx_pos, max_order));
        return exit_ok;
    }
    const SteeringResult res = run_acquisition(scenario, tx_pos);
    write_impulse_csv(out, steered_trace(scenario, tx_pos, res.target,
                                         scenario.steering.steered_divergence_deg, max_order));
    return exit_ok;
}

namespace {

Vec3 parse_tx(const std::string& text) {
    std::istringstream in(text);
    Vec3 v;
    char c1 = 0;
    char c2 = 0;
    if (!(in >> v.x >> c1 >> v.y >> c2 >> v.z) || c1 != ',' || c2 != ',' || !(in >> std::ws).eof()) {
        throw ScenarioError("--tx expects X,Y,Z");
    }
    return v;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> values;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        values.push_back(std::stod(item, &used));
        if (used != item.size()) throw ScenarioError("invalid number '" + item + "'");
    }
    if (values.empty()) throw ScenarioError("--y expects a comma-separated list");
    return values;
}

struct OutputTarget {
    std::ofstream file;
    std::ostream* stream = &std::cout;

    void open(const std::string& path) {
        if (path.empty()) return;
        file.open(path, std::ios::binary);
        if (!file) throw ScenarioError("cannot open output file '" + path + "'");
        stream = &file;
    }
};

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Indoor optical wireless uplink simulator"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string tx_text;
    std::string mode_text = "unsteered";
    std::string out_path;
    std::string log_path;
    std::string modes_text = "both";
    int max_order = 2;
    double sweep_x = 2.0;
    std::string sweep_y_text = "1,2,3,4,5,6,7";

    const auto add_common = [&](CLI::App* cmd, bool with_mode) {
        cmd->add_option("--scenario", scenario_path, "Scenario file (JSON); omit for defaults");
        cmd->add_option("--tx", tx_text, "Transmitter position X,Y,Z in meters");
        if (with_mode) {
            cmd->add_option("--mode", mode_text, "unsteered|steered")
                ->check(CLI::IsMember({"unsteered", "steered"}));
        }
        cmd->add_option("--max-order", max_order, "Highest reflection order traced")
            ->check(CLI::Range(0, 2));
        cmd->add_option("--out", out_path, "Output CSV path (default: stdout)");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "Link metrics at one position");
    add_common(simulate, true);
    CLI::App* sweep = app.add_subcommand("sweep", "Best-branch metrics along a transmitter line");
    add_common(sweep, false);
    sweep->add_option("--x", sweep_x, "Transmitter x in meters");
    sweep->add_option("--y", sweep_y_text, "Comma-separated transmitter y list in meters");
    sweep->add_option("--modes", modes_text, "unsteered|steered|both")
        ->check(CLI::IsMember({"unsteered", "steered", "both"}));
    CLI::App* steer = app.add_subcommand("steer", "Beam-steering acquisition with event log");
    add_common(steer, false);
    steer->add_option("--log", log_path, "Acquisition event log path");
    CLI::App* ir = app.add_subcommand("ir", "Impulse response dump");
    add_common(ir, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_input_error;
    }

    try {
        const Scenario scenario =
            scenario_path.empty() ? default_scenario() : load_scenario_file(scenario_path);
        const Vec3 tx = tx_text.empty() ? scenario.transmitter.position : parse_tx(tx_text);
        const Mode mode = mode_text == "steered" ? Mode::steered : Mode::unsteered;

        OutputTarget out;
        out.open(out_path);

        if (simulate->parsed()) return cmd_simulate(scenario, tx, mode, max_order, *out.stream);
        if (sweep->parsed()) {
            const bool unsteered = modes_text != "steered";
            const bool steered = modes_text != "unsteered";
            return cmd_sweep(scenario, sweep_x, parse_list(sweep_y_text), unsteered, steered,
                             max_order, *out.stream);
        }
        if (steer->parsed()) return cmd_steer(scenario, tx, log_path, *out.stream);
        if (ir->parsed()) return cmd_ir(scenario, tx, mode, max_order, *out.stream);
        return exit_failure;
    } catch (const AcquisitionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_acquisition_failed;
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input_error;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

}  // namespace owsim::cli
