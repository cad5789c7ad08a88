// SPDX-License-Identifier: Apache-2.0
//
// owsim — indoor optical wireless uplink simulator
// Copyright (c) 2026 owsim contributors

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "owsim/scene.hpp"

using namespace owsim;
namespace fs = std::filesystem;

namespace {

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text) {
        if (c == '\n') ++n;
    }
    return n;
}

std::string cli_binary() {
    const char* env = std::getenv("OWSIM_CLI_BIN");
    return env != nullptr ? env : "";
}

int run_cli(const std::string& args) {
    const int status = std::system((cli_binary() + " " + args).c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "owsim_cli_test") { fs::create_directories(path); }
    ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
};

}  // namespace

TEST_CASE("cmd_simulate unsteered emits 32 branch rows plus unit summaries") {
    const Scenario s = default_scenario();
    std::ostringstream out;
    CHECK(cli::cmd_simulate(s, {2.0, 4.0, 1.0}, cli::Mode::unsteered, 2, out) == 0);
    CHECK(count_lines(out.str()) == 41);  // header + 32 branches + 8 summaries
}

TEST_CASE("cmd_sweep cardinality and iteration column") {
    const Scenario s = default_scenario();
    const auto rows = cli::sweep_rows(s, 2.0, {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0}, true, true, 2);
    REQUIRE(rows.size() == 14);
    for (std::size_t i = 0; i < rows.size(); i += 2) {
        const cli::SweepRow& uns = rows[i];
        const cli::SweepRow& st = rows[i + 1];
        CHECK(uns.mode == cli::Mode::unsteered);
        CHECK(st.mode == cli::Mode::steered);
        CHECK(uns.tx_y_m == st.tx_y_m);
        CHECK(uns.iterations == 0);
        CHECK(st.iterations == 6);
        CHECK(st.snr_db > uns.snr_db);
        CHECK(st.delay_spread_s <= uns.delay_spread_s);
    }
}

TEST_CASE("cmd_sweep output is byte-identical across runs") {
    const Scenario s = default_scenario();
    std::ostringstream a;
    std::ostringstream b;
    cli::cmd_sweep(s, 2.0, {3.0, 4.0}, true, true, 2, a);
    cli::cmd_sweep(s, 2.0, {3.0, 4.0}, true, true, 2, b);
    CHECK(a.str() == b.str());
    CHECK(count_lines(a.str()) == 5);
}

TEST_CASE("cmd_steer writes the event log and final metrics") {
    TempDir tmp;
    const Scenario s = default_scenario();
    const fs::path log = tmp.path / "acq.csv";
    std::ostringstream out;
    CHECK(cli::cmd_steer(s, {2.0, 4.0, 1.0}, log.string(), out) == 0);
    CHECK(count_lines(out.str()) == 41);
    const std::string logged = slurp(log);
    CHECK(count_lines(logged) == 25);  // header + 6 iterations x 4 probes
}

TEST_CASE("cmd_ir respects max_order and sort order") {
    const Scenario s = default_scenario();
    std::ostringstream out;
    CHECK(cli::cmd_ir(s, {2.0, 4.0, 1.0}, cli::Mode::unsteered, 0, out) == 0);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "branch_id,bounce_order,delay_s,power_w");
    int prev_branch = -1;
    double prev_delay = 0.0;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        int branch = 0;
        int order = 0;
        double delay = 0.0;
        char comma = 0;
        row >> branch >> comma >> order >> comma >> delay;
        CHECK(order == 0);
        if (branch == prev_branch) CHECK(delay >= prev_delay);
        prev_branch = branch;
        prev_delay = delay;
    }
}

TEST_CASE("cmd_ir: zero reflectivity makes order 2 byte-identical to order 0") {
    Scenario s = default_scenario();
    s.room.reflectivity_ceiling = 0.0;
    s.room.reflectivity_walls = 0.0;
    s.room.reflectivity_floor = 0.0;
    std::ostringstream a;
    std::ostringstream b;
    cli::cmd_ir(s, {2.0, 4.0, 1.0}, cli::Mode::unsteered, 0, a);
    cli::cmd_ir(s, {2.0, 4.0, 1.0}, cli::Mode::unsteered, 2, b);
    CHECK(a.str() == b.str());
}

TEST_CASE("cli process: exit codes and determinism") {
    REQUIRE_MESSAGE(!cli_binary().empty(), "OWSIM_CLI_BIN must point at the owsim binary");
    TempDir tmp;

    SUBCASE("success") {
        CHECK(run_cli("simulate --tx 1,1,1 --max-order 0 --out " +
                      (tmp.path / "m.csv").string()) == 0);
    }

    SUBCASE("missing scenario file exits 2") {
        CHECK(run_cli("simulate --scenario /nonexistent.json 2>/dev/null") == 2);
    }

    SUBCASE("invalid scenario exits 2") {
        const fs::path bad = tmp.path / "bad.json";
        std::ofstream(bad) << R"({"room": {"reflectivity_floor": 2}})";
        CHECK(run_cli("simulate --scenario " + bad.string() + " 2>/dev/null") == 2);
        const fs::path unknown = tmp.path / "unknown.json";
        std::ofstream(unknown) << R"({"bogus_section": 1})";
        CHECK(run_cli("ir --scenario " + unknown.string() + " 2>/dev/null") == 2);
    }

    SUBCASE("acquisition failure exits 3 and writes no log") {
        const fs::path none = tmp.path / "none.json";
        std::ofstream(none) << R"({"receivers": {"units": []}})";
        const fs::path log = tmp.path / "never.csv";
        CHECK(run_cli("steer --scenario " + none.string() + " --log " + log.string() +
                      " 2>/dev/null") == 3);
        CHECK_FALSE(fs::exists(log));
    }

    SUBCASE("custom scenario end to end") {
        const fs::path custom = tmp.path / "one_unit.json";
        std::ofstream(custom) << R"({
            "receivers": {"units": [{"center": [2, 4, 3]}]},
            "transmitter": {"power_w": 0.2}
        })";
        const fs::path out = tmp.path / "one_unit.csv";
        CHECK(run_cli("simulate --scenario " + custom.string() + " --tx 2,4,1 --out " +
                      out.string()) == 0);
        const std::string csv = slurp(out);
        CHECK(count_lines(csv) == 6);  // header + 4 branches + 1 summary
    }

    SUBCASE("sweep runs twice to identical bytes") {
        const fs::path a = tmp.path / "a.csv";
        const fs::path b = tmp.path / "b.csv";
        const std::string args = "sweep --y 4 --out ";
        CHECK(run_cli(args + a.string()) == 0);
        CHECK(run_cli(args + b.string()) == 0);
        const std::string ca = slurp(a);
        CHECK_FALSE(ca.empty());
        CHECK(ca == slurp(b));
    }
}
