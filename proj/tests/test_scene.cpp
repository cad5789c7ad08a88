// SPDX-License-Identifier: Apache-2.0
//
// owsim — indoor optical wireless uplink simulator
// Copyright (c) 2026 owsim contributors

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "owsim/scene.hpp"

using namespace owsim;

namespace {

double surface_area(const Room& r) {
    return 2.0 * (r.width_m * r.length_m + r.width_m * r.height_m + r.length_m * r.height_m);
}

}  // namespace

TEST_CASE("az_el_to_normal axis cases") {
    const Vec3 px = az_el_to_normal(0.0, 0.0);
    CHECK(px.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(px.y == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(px.z == doctest::Approx(0.0).epsilon(1e-12));

    for (double az : {0.0, 37.0, 180.0, 311.0}) {
        const Vec3 down = az_el_to_normal(az, -90.0);
        CHECK(down.x == 0.0);
        CHECK(down.y == 0.0);
        CHECK(down.z == -1.0);
    }
}

TEST_CASE("az_el_to_normal at the default branch orientation") {
    const Vec3 n = az_el_to_normal(45.0, -70.0);
    const double az = 45.0 * std::numbers::pi / 180.0;
    const double el = -70.0 * std::numbers::pi / 180.0;
    CHECK(n.x == doctest::Approx(std::cos(el) * std::cos(az)).epsilon(1e-15));
    CHECK(n.y == doctest::Approx(std::cos(el) * std::sin(az)).epsilon(1e-15));
    CHECK(n.z == doctest::Approx(std::sin(el)).epsilon(1e-15));
    CHECK(n.x == doctest::Approx(0.24184).epsilon(1e-4));
    CHECK(n.y == doctest::Approx(0.24184).epsilon(1e-4));
    CHECK(n.z == doctest::Approx(-0.93969).epsilon(1e-4));
    CHECK(std::abs(norm(n) - 1.0) < 1e-12);
}

TEST_CASE("az_el_to_normal rejects out-of-range elevation") {
    CHECK_THROWS_AS(az_el_to_normal(0.0, 90.5), std::domain_error);
    CHECK_THROWS_AS(az_el_to_normal(0.0, -91.0), std::domain_error);
    CHECK_THROWS_AS(az_el_to_normal(0.0, std::nan("")), std::domain_error);
}

TEST_CASE("az_el round-trip recovers the angles") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uaz(0.0, 360.0);
    std::uniform_real_distribution<double> uel(-89.9, 89.9);
    for (int i = 0; i < 300; ++i) {
        const double az = uaz(rng);
        const double el = uel(rng);
        const Vec3 n = az_el_to_normal(az, el);
        double az_back = 0.0;
        double el_back = 0.0;
        direction_to_az_el(n, az_back, el_back);
        double daz = std::abs(az_back - az);
        daz = std::min(daz, 360.0 - daz);
        CHECK(daz < 1e-9);
        CHECK(std::abs(el_back - el) < 1e-9);
    }
}

TEST_CASE("lambertian_order_from_half_angle") {
    const double m40 = lambertian_order_from_half_angle(40.0);
    CHECK(m40 == doctest::Approx(-std::numbers::ln2 /
                                 std::log(std::cos(40.0 * std::numbers::pi / 180.0)))
                     .epsilon(1e-15));
    CHECK(m40 == doctest::Approx(2.6).epsilon(1e-3));
    // half-power definition: intensity at the semi-angle is half the on-axis value
    const double at_semi = std::pow(std::cos(40.0 * std::numbers::pi / 180.0), m40);
    CHECK(at_semi == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(lambertian_order_from_half_angle(0.0), std::domain_error);
    CHECK_THROWS_AS(lambertian_order_from_half_angle(90.0), std::domain_error);
}

TEST_CASE("build_room element counts at the default grids") {
    const Room room;
    const RoomSurfaces s = build_room(room);
    // ceiling 12800 + floor 12800 + two 8x3 walls 9600 + two 4x3 walls 4800
    CHECK(s.first_order.size() == 54400);
    CHECK(s.second_order.size() == 3400);

    // per-surface breakdown and exact per-surface areas
    std::size_t ceiling = 0;
    std::size_t floor = 0;
    std::size_t x_walls = 0;
    std::size_t y_walls = 0;
    double ceiling_area = 0.0;
    double x_wall_area = 0.0;
    for (const SurfaceElement& e : s.first_order) {
        if (e.normal.z == -1.0) {
            ++ceiling;
            ceiling_area += e.area_m2;
        } else if (e.normal.z == 1.0) {
            ++floor;
        } else if (e.normal.y == 0.0) {
            ++x_walls;
            x_wall_area += e.area_m2;
        } else {
            ++y_walls;
        }
    }
    CHECK(ceiling == 12800);
    CHECK(floor == 12800);
    CHECK(x_walls == 2 * 9600);
    CHECK(y_walls == 2 * 4800);
    CHECK(ceiling_area ==
          doctest::Approx(room.width_m * room.length_m).epsilon(1e-9));
    CHECK(x_wall_area ==
          doctest::Approx(2.0 * room.length_m * room.height_m).epsilon(1e-9));
}

TEST_CASE("build_room degenerate tiling keeps one element per surface") {
    Room cube;
    cube.length_m = 3.0;
    cube.width_m = 3.0;
    cube.height_m = 3.0;
    cube.element_size_first_m = 3.0;
    cube.element_size_second_m = 3.0;
    const RoomSurfaces s = build_room(cube);
    CHECK(s.first_order.size() == 6);
    for (const SurfaceElement& e : s.first_order) CHECK(e.area_m2 == doctest::Approx(9.0));
}

TEST_CASE("build_room tiles every surface area exactly") {
    Room room;
    room.element_size_first_m = 0.07;  // does not divide any dimension
    room.element_size_second_m = 0.3;
    const RoomSurfaces s = build_room(room);
    double total = 0.0;
    for (const SurfaceElement& e : s.first_order) {
        CHECK(e.area_m2 > 0.0);
        total += e.area_m2;
    }
    CHECK(total == doctest::Approx(surface_area(room)).epsilon(1e-9));
    double total2 = 0.0;
    for (const SurfaceElement& e : s.second_order) total2 += e.area_m2;
    CHECK(total2 == doctest::Approx(surface_area(room)).epsilon(1e-9));
}

TEST_CASE("build_room normals point into the room and carry surface properties") {
    const Room room;
    const RoomSurfaces s = build_room(room);
    const Vec3 center{room.width_m / 2.0, room.length_m / 2.0, room.height_m / 2.0};
    double floor_area = 0.0;
    for (const SurfaceElement& e : s.second_order) {
        CHECK(dot(e.normal, center - e.center) >= 0.0);
        CHECK(std::abs(norm(e.normal) - 1.0) < 1e-12);
        CHECK(e.order == room.reflector_order);
        if (e.center.z == 0.0) {
            CHECK(e.reflectivity == room.reflectivity_floor);
            floor_area += e.area_m2;
        } else if (e.center.z == room.height_m) {
            CHECK(e.reflectivity == room.reflectivity_ceiling);
        } else {
            CHECK(e.reflectivity == room.reflectivity_walls);
        }
    }
    CHECK(floor_area == doctest::Approx(room.width_m * room.length_m).epsilon(1e-9));
}

TEST_CASE("default scenario matches the reference configuration") {
    const Scenario s = default_scenario();
    CHECK(s.receiver_units.size() == 8);
    CHECK(s.branch_count() == 32);
    CHECK(s.transmitter.power_w == 0.15);
    CHECK(s.transmitter.semi_angle_deg == 40.0);
    CHECK(s.transmitter.orientation == Vec3{0.0, 0.0, 1.0});
    CHECK(s.transmitter.lambertian_order_wide ==
          doctest::Approx(lambertian_order_from_half_angle(40.0)).epsilon(1e-15));
    CHECK(s.bit_rate_bps == 3.57e9);
    CHECK(s.room.element_size_first_m == 0.05);
    CHECK(s.room.element_size_second_m == 0.20);
    CHECK(s.room.comm_floor_height_m == 1.0);
    CHECK(s.steering.stop_size_m == 0.1);
    CHECK(s.steering.steered_divergence_deg == 2.0);

    int k = 0;
    for (double x : {1.0, 3.0}) {
        for (double y : {1.0, 3.0, 5.0, 7.0}) {
            const ReceiverUnit& u = s.receiver_units[static_cast<std::size_t>(k++)];
            CHECK(u.center == Vec3{x, y, 3.0});
            for (int j = 0; j < 4; ++j) {
                const DetectorBranch& b = u.branches[static_cast<std::size_t>(j)];
                CHECK(b.position == u.center);
                CHECK(b.elevation_deg == -70.0);
                CHECK(b.azimuth_deg == 45.0 + 90.0 * j);
                CHECK(b.fov_deg == 21.0);
                CHECK(b.area_m2 == 4.0e-6);
                CHECK(b.responsivity_a_per_w == 0.4);
                const Vec3 expect = az_el_to_normal(b.azimuth_deg, b.elevation_deg);
                CHECK(norm(b.normal - expect) < 1e-12);
            }
        }
    }
}

TEST_CASE("load_scenario: empty document yields the defaults") {
    for (const char* text : {"", "   \n", "{}"}) {
        const Scenario s = load_scenario(text);
        const Scenario d = default_scenario();
        CHECK(s.receiver_units.size() == d.receiver_units.size());
        CHECK(s.transmitter.power_w == d.transmitter.power_w);
        CHECK(s.bit_rate_bps == d.bit_rate_bps);
        CHECK(s.room.length_m == d.room.length_m);
        CHECK(s.noise.background_current_a == d.noise.background_current_a);
    }
}

TEST_CASE("load_scenario: single-field override keeps everything else") {
    const Scenario s = load_scenario(R"({"transmitter": {"power_w": 0.3}})");
    const Scenario d = default_scenario();
    CHECK(s.transmitter.power_w == 0.3);
    CHECK(s.transmitter.semi_angle_deg == d.transmitter.semi_angle_deg);
    CHECK(s.transmitter.lambertian_order_wide == d.transmitter.lambertian_order_wide);
    CHECK(s.receiver_units.size() == 8);
    CHECK(s.bit_rate_bps == d.bit_rate_bps);
}

TEST_CASE("load_scenario: semi-angle override re-derives the wide order") {
    const Scenario s = load_scenario(R"({"transmitter": {"semi_angle_deg": 30}})");
    CHECK(s.transmitter.lambertian_order_wide ==
          doctest::Approx(lambertian_order_from_half_angle(30.0)).epsilon(1e-15));
    const Scenario e = load_scenario(
        R"({"transmitter": {"semi_angle_deg": 30, "lambertian_order_wide": 1}})");
    CHECK(e.transmitter.lambertian_order_wide == 1.0);
}

TEST_CASE("load_scenario: invariant violations name the field") {
    CHECK_THROWS_WITH_AS(load_scenario(R"({"room": {"reflectivity_walls": 1.2}})"),
                         doctest::Contains("reflectivity_walls"), ScenarioError);
    CHECK_THROWS_WITH_AS(load_scenario(R"({"signaling": {"bit_rate_bps": 0}})"),
                         doctest::Contains("bit_rate_bps"), ScenarioError);
    CHECK_THROWS_WITH_AS(load_scenario(R"({"transmitter": {"power_w": -1}})"),
                         doctest::Contains("power_w"), ScenarioError);
    CHECK_THROWS_WITH_AS(load_scenario(R"({"steering": {"stop_size_m": 100}})"),
                         doctest::Contains("stop_size_m"), ScenarioError);
}

TEST_CASE("load_scenario: unknown keys are rejected") {
    CHECK_THROWS_WITH_AS(load_scenario(R"({"rooms": {}})"), doctest::Contains("unknown key"),
                         ScenarioError);
    CHECK_THROWS_WITH_AS(load_scenario(R"({"room": {"lenght_m": 8}})"),
                         doctest::Contains("unknown key"), ScenarioError);
}

TEST_CASE("load_scenario: malformed documents carry parse context") {
    CHECK_THROWS_WITH_AS(load_scenario("{not json"), doctest::Contains("parse error"),
                         ScenarioError);
    CHECK_THROWS_AS(load_scenario("[1,2,3]"), ScenarioError);
}

TEST_CASE("load_scenario: receiver unit overrides") {
    const Scenario s = load_scenario(R"({"receivers": {"units": [{"center": [2, 4, 3]}]}})");
    CHECK(s.receiver_units.size() == 1);
    CHECK(s.receiver_units[0].center == Vec3{2.0, 4.0, 3.0});
    CHECK(s.receiver_units[0].branches[0].fov_deg == 21.0);

    const Scenario custom = load_scenario(R"({
        "receivers": {"units": [{
            "center": [2, 4, 3],
            "branches": [
                {"azimuth_deg": 0,   "elevation_deg": -50, "fov_deg": 30},
                {"azimuth_deg": 90,  "elevation_deg": -50},
                {"azimuth_deg": 180, "elevation_deg": -50},
                {"azimuth_deg": 270, "elevation_deg": -50}
            ]
        }]}
    })");
    CHECK(custom.receiver_units[0].branches[0].fov_deg == 30.0);
    CHECK(custom.receiver_units[0].branches[1].fov_deg == 21.0);
    CHECK(custom.receiver_units[0].branches[2].elevation_deg == -50.0);

    CHECK_THROWS_WITH_AS(
        load_scenario(R"({"receivers": {"units": [{"center": [2,4,3], "branches": []}]}})"),
        doctest::Contains("4 branches"), ScenarioError);
    CHECK_THROWS_WITH_AS(load_scenario(R"({"receivers": {"units": [{}]}})"),
                         doctest::Contains("center"), ScenarioError);

    // no receivers at all is a valid (if useless) scenario
    const Scenario empty = load_scenario(R"({"receivers": {"units": []}})");
    CHECK(empty.branch_count() == 0);
}

TEST_CASE("load_scenario: units must sit on the ceiling inside the room") {
    CHECK_THROWS_WITH_AS(load_scenario(R"({"receivers": {"units": [{"center": [2, 4, 2]}]}})"),
                         doctest::Contains("ceiling"), ScenarioError);
    CHECK_THROWS_WITH_AS(load_scenario(R"({"receivers": {"units": [{"center": [5, 4, 3]}]}})"),
                         doctest::Contains("footprint"), ScenarioError);
}

TEST_CASE("validate rejects a transmitter off the communication floor") {
    Scenario s = default_scenario();
    s.transmitter.position.z = 1.5;
    CHECK_THROWS_WITH_AS(validate(s), doctest::Contains("comm_floor_height_m"), ScenarioError);
    s.transmitter.position = {9.0, 1.0, 1.0};
    CHECK_THROWS_WITH_AS(validate(s), doctest::Contains("footprint"), ScenarioError);
}

TEST_CASE("validate names every violated field") {
    const auto broken = [](auto mutate) {
        Scenario s = default_scenario();
        mutate(s);
        return s;
    };
    CHECK_THROWS_WITH_AS(
        validate(broken([](Scenario& s) { s.room.element_size_first_m = 5.0; })),
        doctest::Contains("element_size_first_m"), ScenarioError);
    CHECK_THROWS_WITH_AS(
        validate(broken([](Scenario& s) { s.receiver_units[0].branches[1].fov_deg = 91.0; })),
        doctest::Contains("fov_deg"), ScenarioError);
    CHECK_THROWS_WITH_AS(
        validate(broken([](Scenario& s) { s.receiver_units[2].branches[0].area_m2 = 0.0; })),
        doctest::Contains("area_m2"), ScenarioError);
    CHECK_THROWS_WITH_AS(
        validate(broken([](Scenario& s) { s.transmitter.orientation = {0.0, 0.0, 2.0}; })),
        doctest::Contains("orientation"), ScenarioError);
    CHECK_THROWS_WITH_AS(
        validate(broken([](Scenario& s) { s.receiver_units[1].branches[3].normal.x += 1e-3; })),
        doctest::Contains("normal"), ScenarioError);
    CHECK_THROWS_WITH_AS(
        validate(broken([](Scenario& s) { s.noise.background_current_a = -1.0; })),
        doctest::Contains("background_current_a"), ScenarioError);
    CHECK_THROWS_WITH_AS(
        validate(broken([](Scenario& s) { s.steering.steered_divergence_deg = 90.0; })),
        doctest::Contains("steered_divergence_deg"), ScenarioError);
}
