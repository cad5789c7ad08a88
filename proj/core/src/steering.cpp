// SPDX-License-Identifier: Apache-2.0
//
// owsim — indoor optical wireless uplink simulator
// Copyright (c) 2026 owsim contributors

#include "owsim/steering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "owsim/format.hpp"

namespace owsim {

namespace {

constexpr double deg_to_rad = std::numbers::pi / 180.0;

Beam aimed_beam(const Scenario& scenario, const Vec3& tx_pos, const Vec3& aim,
                double half_power_deg) {
    return Beam{tx_pos, normalized(aim - tx_pos), scenario.transmitter.power_w,
                lambertian_order_from_half_angle(half_power_deg), 0.0};
}

}  // namespace

Region coverage_region(const Vec3& tx_pos, double semi_angle_deg, double ceiling_z,
                       const Room& room) {
    const double height = ceiling_z - tx_pos.z;
    if (!(height > 0.0)) {
        throw std::domain_error("coverage_region: transmitter at or above the ceiling");
    }
    const double half = height * std::tan(semi_angle_deg * deg_to_rad);
    const double x0 = std::max(0.0, tx_pos.x - half);
    const double x1 = std::min(room.width_m, tx_pos.x + half);
    const double y0 = std::max(0.0, tx_pos.y - half);
    const double y1 = std::min(room.length_m, tx_pos.y + half);
    Region r;
    r.center = {(x0 + x1) / 2.0, (y0 + y1) / 2.0, ceiling_z};
    r.half_x = (x1 - x0) / 2.0;
    r.half_y = (y1 - y0) / 2.0;
    return r;
}

std::array<Region, 4> subdivide(const Region& region) {
    const double hx = region.half_x / 2.0;
    const double hy = region.half_y / 2.0;
    const auto child = [&](double sx, double sy) {
        return Region{{region.center.x + sx * hx, region.center.y + sy * hy, region.center.z},
                      hx, hy};
    };
    return {child(-1, -1), child(+1, -1), child(-1, +1), child(+1, +1)};
}

double probe_snr(const Scenario& scenario, const Vec3& tx_pos, const Region& region) {
    const double height = region.center.z - tx_pos.z;
    if (!(height > 0.0)) {
        throw std::domain_error("probe_snr: transmitter at or above the ceiling");
    }
    double divergence_deg;
    if (scenario.steering.probe_fills_subquadrant) {
        // half-power cone wide enough to reach the region's diagonal
        const double reach = (region.side_m() / 2.0) * std::numbers::sqrt2;
        divergence_deg = std::atan(reach / height) / deg_to_rad;
    } else {
        divergence_deg = scenario.steering.steered_divergence_deg;
    }
    const Beam probe = aimed_beam(scenario, tx_pos, region.center, divergence_deg);
    const ImpulseResponse ir = trace(scenario, probe, 0);
    return link_metrics(ir, scenario).best_snr_db;
}

ImpulseResponse steered_trace(const Scenario& scenario, const Vec3& tx_pos, const Vec3& target,
                              double divergence_deg, int max_order) {
    if (!(divergence_deg > 0.0 && divergence_deg < 90.0)) {
        throw std::domain_error("steered_trace: divergence must be within (0, 90)");
    }
    if (std::abs(target.z - scenario.room.height_m) > 1e-9) {
        throw std::domain_error("steered_trace: target must lie on the ceiling plane");
    }
    const Beam beam = aimed_beam(scenario, tx_pos, target, divergence_deg);
    return trace(scenario, beam, max_order);
}

SteeringResult run_acquisition(const Scenario& scenario, const Vec3& tx_pos) {
    const SteeringConfig& cfg = scenario.steering;
    Region region = coverage_region(tx_pos, scenario.transmitter.semi_angle_deg,
                                    scenario.room.height_m, scenario.room);
    if (!(region.side_m() > cfg.stop_size_m)) {
        throw std::domain_error("run_acquisition: coverage region not larger than the stop size");
    }

    SteeringResult result;
    int iteration = 0;
    while (region.side_m() > cfg.stop_size_m) {
        ++iteration;
        const std::array<Region, 4> children = subdivide(region);
        std::array<double, 4> snrs{};
        for (int i = 0; i < 4; ++i) {
            snrs[static_cast<std::size_t>(i)] =
                probe_snr(scenario, tx_pos, children[static_cast<std::size_t>(i)]);
        }
        int winner = -1;
        for (int i = 0; i < 4; ++i) {
            const double s = snrs[static_cast<std::size_t>(i)];
            if (std::isinf(s) && s < 0.0) continue;
            if (winner < 0 || s > snrs[static_cast<std::size_t>(winner)]) winner = i;
        }
        for (int i = 0; i < 4; ++i) {
            const Region& child = children[static_cast<std::size_t>(i)];
            AcquisitionEvent ev;
            ev.iteration = iteration;
            ev.probed_region = child;
            direction_to_az_el(child.center - tx_pos, ev.azimuth_deg, ev.elevation_deg);
            ev.measured_best_snr_db = snrs[static_cast<std::size_t>(i)];
            ev.chosen = i == winner;
            result.events.push_back(ev);
        }
        if (winner < 0) {
            if (iteration == 1) {
                throw AcquisitionError("run_acquisition: no receiver inside the coverage region");
            }
            // Signal lost below the root: keep the current region center.
            result.degraded = true;
            --iteration;
            break;
        }
        region = children[static_cast<std::size_t>(winner)];
    }
    result.iterations = iteration;
    result.target = region.center;
    const ImpulseResponse ir = steered_trace(scenario, tx_pos, result.target,
                                             cfg.steered_divergence_deg, 2);
    result.final_metrics = link_metrics(ir, scenario);
    return result;
}

void write_acquisition_log(std::ostream& out, std::span<const AcquisitionEvent> events) {
    out << "iteration,region_center_x,region_center_y,region_side_m,az_deg,el_deg,snr_db,"
           "chosen\n";
    for (const AcquisitionEvent& ev : events) {
        out << ev.iteration << ',' << format_double(ev.probed_region.center.x) << ','
            << format_double(ev.probed_region.center.y) << ','
            << format_double(ev.probed_region.side_m()) << ',' << format_double(ev.azimuth_deg)
            << ',' << format_double(ev.elevation_deg) << ','
            << format_double(ev.measured_best_snr_db) << ',' << (ev.chosen ? 1 : 0) << '\n';
    }
}

}  // namespace owsim
