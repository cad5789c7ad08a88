// SPDX-License-Identifier: Apache-2.0
//
// owsim — indoor optical wireless uplink simulator
// Copyright (c) 2026 owsim contributors

#include "owsim/raytrace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "owsim/format.hpp"

namespace owsim {

namespace {

constexpr double deg_to_rad = std::numbers::pi / 180.0;

double pow_order(double base, double order) {
    if (order == 1.0) return base;
    if (order == 0.0) return 1.0;
    return std::pow(base, order);
}

// Intensity from the cosine of the emission angle; zero for cos <= 0.
double intensity_cos(double power_w, double order, double cos_angle) {
    if (cos_angle <= 0.0) return 0.0;
    return (order + 1.0) / (2.0 * std::numbers::pi) * power_w * pow_order(cos_angle, order);
}

// Last hop from a reflector element to a branch, per unit emitted power.
struct ElementToBranch {
    int element = 0;
    double factor = 0.0;  // (n+1)/2pi * cos^n(emit) * cos(arrive) * area / d^2
    double dist = 0.0;
};

std::vector<std::vector<ElementToBranch>> branch_visibility(
    const Scenario& scenario, std::span<const SurfaceElement> elements) {
    const int n_branches = scenario.branch_count();
    std::vector<std::vector<ElementToBranch>> vis(static_cast<std::size_t>(n_branches));
    for (int b = 0; b < n_branches; ++b) {
        const DetectorBranch& branch = scenario.branch(b);
        const double cos_fov = std::cos(branch.fov_deg * deg_to_rad);
        auto& list = vis[static_cast<std::size_t>(b)];
        for (int e = 0; e < static_cast<int>(elements.size()); ++e) {
            const SurfaceElement& el = elements[static_cast<std::size_t>(e)];
            const Vec3 delta = branch.position - el.center;
            const double d2 = norm_squared(delta);
            if (!(d2 > 0.0)) continue;
            const double d = std::sqrt(d2);
            const Vec3 dir = delta / d;
            const double cos_emit = dot(el.normal, dir);
            if (cos_emit <= 0.0) continue;
            const double cos_arrive = dot(branch.normal, dir * -1.0);
            if (cos_arrive < cos_fov) continue;
            const double factor = intensity_cos(1.0, el.order, cos_emit) * cos_arrive *
                                  branch.area_m2 / d2;
            if (!(factor > 0.0)) continue;
            list.push_back({e, factor, d});
        }
    }
    return vis;
}

void first_hop(const Beam& beam, std::span<const SurfaceElement> elements,
               std::vector<double>& powers, std::vector<double>& dists) {
    powers.assign(elements.size(), 0.0);
    dists.assign(elements.size(), 0.0);
    for (std::size_t e = 0; e < elements.size(); ++e) {
        const SurfaceElement& el = elements[e];
        const Vec3 delta = el.center - beam.origin;
        const double d2 = norm_squared(delta);
        if (!(d2 > 0.0)) continue;
        const double d = std::sqrt(d2);
        const Vec3 dir = delta / d;
        const double cos_emit = dot(beam.axis, dir);
        if (cos_emit <= 0.0 || cos_emit < beam.cos_cutoff) continue;
        const double cos_capture = dot(el.normal, dir * -1.0);
        if (cos_capture <= 0.0) continue;
        powers[e] = intensity_cos(beam.power_w, beam.order, cos_emit) * cos_capture *
                    el.area_m2 / d2;
        dists[e] = d;
    }
}

}  // namespace

void ImpulseResponse::sort_by_delay() {
    for (auto& list : branches_) {
        std::stable_sort(list.begin(), list.end(),
                         [](const PathContribution& a, const PathContribution& b) {
                             return a.delay_s < b.delay_s;
                         });
    }
}

double lambertian_intensity(double power_w, double order, double angle_rad) {
    if (!(power_w >= 0.0)) throw std::domain_error("lambertian_intensity: power must be >= 0");
    if (!(order >= 0.0)) throw std::domain_error("lambertian_intensity: order must be >= 0");
    if (!(angle_rad >= 0.0 && angle_rad <= std::numbers::pi)) {
        throw std::domain_error("lambertian_intensity: angle must be within [0, pi]");
    }
    if (angle_rad >= std::numbers::pi / 2.0) return 0.0;
    return intensity_cos(power_w, order, std::cos(angle_rad));
}

std::optional<PathContribution> los_contribution(const Vec3& source_pos, const Vec3& source_normal,
                                                 double source_power_w, double source_order,
                                                 const DetectorBranch& branch) {
    const Vec3 delta = branch.position - source_pos;
    const double d2 = norm_squared(delta);
    if (!(d2 > 0.0)) {
        throw std::domain_error("los_contribution: source and detector positions coincide");
    }
    const double d = std::sqrt(d2);
    const Vec3 dir = delta / d;
    const double cos_emit = dot(source_normal, dir);
    if (cos_emit <= 0.0) return std::nullopt;
    const double cos_arrive = dot(branch.normal, dir * -1.0);
    if (cos_arrive < std::cos(branch.fov_deg * deg_to_rad)) return std::nullopt;
    const double power = intensity_cos(source_power_w, source_order, cos_emit) * cos_arrive *
                         branch.area_m2 / d2;
    return PathContribution{d / speed_of_light_m_per_s, power, 0};
}

std::vector<double> incident_powers(const Beam& beam, std::span<const SurfaceElement> elements) {
    std::vector<double> powers;
    std::vector<double> dists;
    first_hop(beam, elements, powers, dists);
    return powers;
}

ImpulseResponse trace(const Scenario& scenario, const Beam& beam, int max_order) {
    if (max_order < 0 || max_order > 2) {
        throw std::invalid_argument("trace: max_order must be 0, 1 or 2");
    }
    const int n_branches = scenario.branch_count();
    ImpulseResponse ir(n_branches);

    // direct paths
    for (int b = 0; b < n_branches; ++b) {
        const DetectorBranch& branch = scenario.branch(b);
        const Vec3 delta = branch.position - beam.origin;
        const double d2 = norm_squared(delta);
        if (!(d2 > 0.0)) continue;
        const double d = std::sqrt(d2);
        const Vec3 dir = delta / d;
        const double cos_emit = dot(beam.axis, dir);
        if (cos_emit <= 0.0 || cos_emit < beam.cos_cutoff) continue;
        const double cos_arrive = dot(branch.normal, dir * -1.0);
        if (cos_arrive < std::cos(branch.fov_deg * deg_to_rad)) continue;
        const double power = intensity_cos(beam.power_w, beam.order, cos_emit) * cos_arrive *
                             branch.area_m2 / d2;
        if (power > 0.0) ir.add(b, {d / speed_of_light_m_per_s, power, 0});
    }
    if (max_order == 0) {
        ir.sort_by_delay();
        return ir;
    }

    const RoomSurfaces surfaces = build_room(scenario.room);

    // one bounce over the fine grid
    {
        std::vector<double> inc;
        std::vector<double> dist;
        first_hop(beam, surfaces.first_order, inc, dist);
        const auto vis = branch_visibility(scenario, surfaces.first_order);
        for (int b = 0; b < n_branches; ++b) {
            for (const ElementToBranch& hop : vis[static_cast<std::size_t>(b)]) {
                const std::size_t e = static_cast<std::size_t>(hop.element);
                if (!(inc[e] > 0.0)) continue;
                const SurfaceElement& el = surfaces.first_order[e];
                const double power = inc[e] * el.reflectivity * hop.factor;
                if (!(power > 0.0)) continue;
                ir.add(b, {(dist[e] + hop.dist) / speed_of_light_m_per_s, power, 1});
            }
        }
    }

    // two bounces over the coarse grid
    if (max_order >= 2) {
        const std::span<const SurfaceElement> grid = surfaces.second_order;
        std::vector<double> inc;
        std::vector<double> dist;
        first_hop(beam, grid, inc, dist);
        std::vector<double> emitted(grid.size());
        for (std::size_t a = 0; a < grid.size(); ++a) emitted[a] = inc[a] * grid[a].reflectivity;
        const auto vis = branch_visibility(scenario, grid);
        for (int b = 0; b < n_branches; ++b) {
            for (const ElementToBranch& hop : vis[static_cast<std::size_t>(b)]) {
                const SurfaceElement& second = grid[static_cast<std::size_t>(hop.element)];
                const double reflect_factor = second.reflectivity * hop.factor;
                for (std::size_t a = 0; a < grid.size(); ++a) {
                    if (static_cast<int>(a) == hop.element) continue;
                    if (!(emitted[a] > 0.0)) continue;
                    const SurfaceElement& first = grid[a];
                    const Vec3 delta = second.center - first.center;
                    const double d2 = norm_squared(delta);
                    if (!(d2 > 0.0)) continue;
                    const double d = std::sqrt(d2);
                    const Vec3 dir = delta / d;
                    const double cos_emit = dot(first.normal, dir);
                    if (cos_emit <= 0.0) continue;
                    const double cos_capture = dot(second.normal, dir * -1.0);
                    if (cos_capture <= 0.0) continue;
                    const double arriving = intensity_cos(emitted[a], first.order, cos_emit) *
                                            cos_capture * second.area_m2 / d2;
                    const double power = arriving * reflect_factor;
                    if (!(power > 0.0)) continue;
                    ir.add(b, {(dist[a] + d + hop.dist) / speed_of_light_m_per_s, power, 2});
                }
            }
        }
    }

    ir.sort_by_delay();
    return ir;
}

ImpulseResponse trace_unsteered(const Scenario& scenario, const Vec3& tx_pos, int max_order) {
    const Room& room = scenario.room;
    if (!(tx_pos.x >= 0.0 && tx_pos.x <= room.width_m && tx_pos.y >= 0.0 &&
          tx_pos.y <= room.length_m)) {
        throw std::domain_error("trace_unsteered: tx_pos outside the room footprint");
    }
    if (std::abs(tx_pos.z - room.comm_floor_height_m) > 1e-9) {
        throw std::domain_error("trace_unsteered: tx_pos must lie on the communication floor");
    }
    const Transmitter& tx = scenario.transmitter;
    const Beam beam{tx_pos, tx.orientation, tx.power_w, tx.lambertian_order_wide,
                    std::cos(tx.semi_angle_deg * deg_to_rad)};
    return trace(scenario, beam, max_order);
}

void write_impulse_csv(std::ostream& out, const ImpulseResponse& ir) {
    out << "branch_id,bounce_order,delay_s,power_w\n";
    for (int b = 0; b < ir.branch_count(); ++b) {
        for (const PathContribution& c : ir.branch(b)) {
            out << b << ',' << c.bounce_order << ',' << format_double(c.delay_s) << ','
                << format_double(c.power_w) << '\n';
        }
    }
}

}  // namespace owsim
