// SPDX-License-Identifier: Apache-2.0
//
// owsim — indoor optical wireless uplink simulator
// Copyright (c) 2026 owsim contributors

#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "owsim/vec3.hpp"

namespace owsim {

// Thrown by scenario construction and validation; the message names the violated constraint.
class ScenarioError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Rectangular empty room. Coordinate frame: origin at a floor corner, z up.
// x spans the width (short side), y spans the length (long side); floor at
// z = 0, ceiling at z = height_m. Receivers sit on the ceiling, transmitters
// on the communication floor z = comm_floor_height_m.
struct Room {
    double length_m = 8.0;  // y extent
    double width_m = 4.0;   // x extent
    double height_m = 3.0;
    double reflectivity_ceiling = 0.8;
    double reflectivity_walls = 0.8;
    double reflectivity_floor = 0.3;
    double reflector_order = 1.0;           // Lambertian re-emission order of all surfaces
    double element_size_first_m = 0.05;     // patch side for first-bounce tracing
    double element_size_second_m = 0.20;    // patch side for second-bounce tracing
    double comm_floor_height_m = 1.0;
};

// One discretized reflector patch. The normal points into the room interior.
struct SurfaceElement {
    Vec3 center;
    Vec3 normal;
    double area_m2 = 0.0;
    double reflectivity = 0.0;
    double order = 1.0;
};

// Element grids for the two reflection orders.
struct RoomSurfaces {
    std::vector<SurfaceElement> first_order;
    std::vector<SurfaceElement> second_order;
};

struct Transmitter {
    Vec3 position{2.0, 4.0, 1.0};
    Vec3 orientation{0.0, 0.0, 1.0};
    double power_w = 0.15;
    double semi_angle_deg = 40.0;        // hard coverage cone half-angle of the unsteered beam
    double lambertian_order_wide = 0.0;  // in-cone emission order; scenario construction fills
                                         // the half-power match to semi_angle_deg when unset
};

struct DetectorBranch {
    Vec3 position;
    double azimuth_deg = 0.0;
    double elevation_deg = 0.0;
    Vec3 normal;  // derived from (azimuth, elevation)
    double area_m2 = 4.0e-6;
    double fov_deg = 21.0;  // acceptance half-angle
    double responsivity_a_per_w = 0.4;
};

// Four co-located detector branches differing only in orientation.
struct ReceiverUnit {
    Vec3 center;
    std::array<DetectorBranch, 4> branches;
};

struct NoiseConfig {
    double background_current_a = 2.0e-4;                 // ambient-light photocurrent per branch
    double preamp_noise_density_a_per_sqrt_hz = 2.7e-12;  // input-referred
    double electron_charge_c = 1.602176634e-19;
};

struct SteeringConfig {
    double stop_size_m = 0.1;            // terminal sub-quadrant side
    double steered_divergence_deg = 2.0; // half-power semi-angle of the final steered beam
    bool probe_fills_subquadrant = true; // probe divergence covers the sub-quadrant diagonal
};

struct Scenario {
    Room room;
    Transmitter transmitter;
    std::vector<ReceiverUnit> receiver_units;
    NoiseConfig noise;
    double bit_rate_bps = 3.57e9;
    SteeringConfig steering;

    int branch_count() const { return static_cast<int>(receiver_units.size()) * 4; }
    // Global branch ids are unit-major: unit u owns branches 4u..4u+3.
    const DetectorBranch& branch(int branch_id) const {
        return receiver_units[static_cast<std::size_t>(branch_id) / 4]
            .branches[static_cast<std::size_t>(branch_id) % 4];
    }
    int unit_of_branch(int branch_id) const { return branch_id / 4; }
};

// Unit direction for a (azimuth, elevation) pair in degrees. Elevation is
// measured from the horizontal x-y plane (negative pointing down), azimuth
// from +x toward +y. Throws std::domain_error for elevation outside [-90, 90].
Vec3 az_el_to_normal(double azimuth_deg, double elevation_deg);

// Inverse of az_el_to_normal for any nonzero direction; azimuth normalized to [0, 360).
void direction_to_az_el(const Vec3& direction, double& azimuth_deg, double& elevation_deg);

// Lambertian emission order whose intensity halves at the given semi-angle:
// order = -ln 2 / ln(cos(semi_angle)). Throws std::domain_error outside (0, 90).
double lambertian_order_from_half_angle(double half_power_semi_angle_deg);

// Tiles all six room surfaces with square patches at the two grid sizes.
// Edge patches are shrunk so each surface's total element area is exact.
RoomSurfaces build_room(const Room& room);

// A receiver unit with the default branch set (El -70°, Az 45/135/225/315°,
// FOV 21°, 4 mm², 0.4 A/W) at the given ceiling position.
ReceiverUnit make_receiver_unit(const Vec3& center);

// The built-in reference configuration: 8 m x 4 m x 3 m room, eight ceiling
// receiver units, 150 mW transmitter with a 40° coverage cone, 3.57 Gb/s OOK.
Scenario default_scenario();

// Parses a scenario document (JSON object; empty input means all defaults)
// and validates every invariant. Unknown keys and malformed values raise
// ScenarioError with field context.
Scenario load_scenario(const std::string& text);
Scenario load_scenario_file(const std::string& path);

// Checks every scenario invariant; throws ScenarioError naming the violation.
void validate(const Scenario& scenario);

}  // namespace owsim
