// SPDX-License-Identifier: Apache-2.0
//
// owsim — indoor optical wireless uplink simulator
// Copyright (c) 2026 owsim contributors

#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "owsim/metrics.hpp"
#include "owsim/raytrace.hpp"
#include "owsim/scene.hpp"

namespace owsim {

// Raised when the quadrant search finds no receiver at the root iteration.
class AcquisitionError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Axis-aligned rectangle on the ceiling plane. Unclipped coverage regions are
// squares; wall clipping can shrink one axis, in which case side_m() reports
// the larger extent and subdivision still quarters both axes.
struct Region {
    Vec3 center;  // z = ceiling height
    double half_x = 0.0;
    double half_y = 0.0;

    double side_m() const { return 2.0 * (half_x > half_y ? half_x : half_y); }
};

struct AcquisitionEvent {
    int iteration = 0;  // 1-based
    Region probed_region;
    double azimuth_deg = 0.0;   // probe beam axis, azimuth in [0, 360)
    double elevation_deg = 0.0; // probe beam axis, positive up
    double measured_best_snr_db = 0.0;
    bool chosen = false;
};

struct SteeringResult {
    Vec3 target;  // final aim point on the ceiling
    int iterations = 0;
    bool degraded = false;  // probes lost the signal below the root; parent center kept
    std::vector<AcquisitionEvent> events;
    LinkMetrics final_metrics;
};

// Footprint of the transmitter coverage cone on the ceiling, clipped to the
// room. Throws std::domain_error when the transmitter is at or above the
// ceiling.
Region coverage_region(const Vec3& tx_pos, double semi_angle_deg, double ceiling_z,
                       const Room& room);

// Four equal quarters in deterministic order: (-x-y), (+x-y), (-x+y), (+x+y).
std::array<Region, 4> subdivide(const Region& region);

// Best-branch SNR of a setup probe aimed at the region center. The probe beam
// half-power semi-angle covers the region diagonal (so any unit inside the
// region is illuminated) and only direct paths are traced. Returns -inf when
// no branch receives power.
double probe_snr(const Scenario& scenario, const Vec3& tx_pos, const Region& region);

// Quadrant-subdivision acquisition: starting from the coverage region,
// repeatedly probe the four quarters, descend into the best one, and stop
// once the region side reaches the configured stop size. The final metrics
// come from a full two-bounce trace of the steered beam at the chosen target.
SteeringResult run_acquisition(const Scenario& scenario, const Vec3& tx_pos);

// Channel trace of the steered beam: a narrow Lambertian source whose
// half-power semi-angle is divergence_deg, aimed from tx_pos at the target,
// carrying the full transmitter power (ideal lossless redirection).
ImpulseResponse steered_trace(const Scenario& scenario, const Vec3& tx_pos, const Vec3& target,
                              double divergence_deg, int max_order = 2);

// CSV log: header iteration,region_center_x,region_center_y,region_side_m,
// az_deg,el_deg,snr_db,chosen; one row per probe.
void write_acquisition_log(std::ostream& out, std::span<const AcquisitionEvent> events);

}  // namespace owsim
