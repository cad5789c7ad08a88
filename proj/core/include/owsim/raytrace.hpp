// SPDX-License-Identifier: Apache-2.0
//
// owsim — indoor optical wireless uplink simulator
// Copyright (c) 2026 owsim contributors

#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "owsim/scene.hpp"
#include "owsim/vec3.hpp"

namespace owsim {

inline constexpr double speed_of_light_m_per_s = 2.99792458e8;

// One propagation path landing on a detector branch.
struct PathContribution {
    double delay_s = 0.0;
    double power_w = 0.0;
    int bounce_order = 0;

    bool operator==(const PathContribution&) const = default;
};

// Path contributions per global branch id, each branch sorted by delay.
// Zero-power paths are never stored.
class ImpulseResponse {
  public:
    ImpulseResponse() = default;
    explicit ImpulseResponse(int n_branches) : branches_(static_cast<std::size_t>(n_branches)) {}

    int branch_count() const { return static_cast<int>(branches_.size()); }
    std::span<const PathContribution> branch(int branch_id) const {
        return branches_.at(static_cast<std::size_t>(branch_id));
    }
    void add(int branch_id, const PathContribution& c) {
        branches_.at(static_cast<std::size_t>(branch_id)).push_back(c);
    }
    // Stable sort by delay; ties keep canonical accumulation order.
    void sort_by_delay();

    bool operator==(const ImpulseResponse&) const = default;

  private:
    std::vector<std::vector<PathContribution>> branches_;
};

// A generalized Lambertian point source; axis must be unit length. Emission
// is zero where the angle from the axis exceeds acos(cos_cutoff);
// cos_cutoff = 0 keeps the natural hemisphere, cos(semi_angle) models a
// hard-truncated coverage cone.
struct Beam {
    Vec3 origin;
    Vec3 axis{0.0, 0.0, 1.0};
    double power_w = 0.0;
    double order = 1.0;
    double cos_cutoff = 0.0;
};

// Radiant intensity (W/sr) of a generalized Lambertian source at the given
// angle from its axis: ((order+1)/2pi) * power * cos^order(angle), zero from
// pi/2 onward.
double lambertian_intensity(double power_w, double order, double angle_rad);

// Direct-path power and delay from a Lambertian point source to a detector
// branch under the small-detector approximation (area/d^2 as solid angle).
// Returns nullopt when the source faces away (>= 90°) or the arrival angle
// exceeds the branch field of view. Throws std::domain_error for coincident
// source and detector positions.
std::optional<PathContribution> los_contribution(const Vec3& source_pos, const Vec3& source_normal,
                                                 double source_power_w, double source_order,
                                                 const DetectorBranch& branch);

// Power incident on each element (irradiance times patch area) from the beam.
// This is the first hop of the bounced paths; summing it over a full grid
// audits energy capture of the discretization.
std::vector<double> incident_powers(const Beam& beam, std::span<const SurfaceElement> elements);

// Full channel trace from an arbitrary source beam: direct paths, one-bounce
// paths over the first-order grid, two-bounce paths over the second-order
// grid. Contributions accumulate in canonical (branch, element) order, so
// results are bit-stable run to run.
ImpulseResponse trace(const Scenario& scenario, const Beam& beam, int max_order);

// Trace for the unsteered transmitter located at tx_pos: wide Lambertian
// emission hard-truncated to the coverage cone. Throws std::domain_error when
// tx_pos is outside the room or off the communication floor.
ImpulseResponse trace_unsteered(const Scenario& scenario, const Vec3& tx_pos, int max_order);

// CSV dump: header branch_id,bounce_order,delay_s,power_w; rows sorted by
// (branch_id, delay_s); 17 significant digits.
void write_impulse_csv(std::ostream& out, const ImpulseResponse& ir);

}  // namespace owsim
