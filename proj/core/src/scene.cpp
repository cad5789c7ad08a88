// SPDX-License-Identifier: Apache-2.0
//
// owsim — indoor optical wireless uplink simulator
// Copyright (c) 2026 owsim contributors

#include "owsim/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <initializer_list>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace owsim {

namespace {

constexpr double deg_to_rad = std::numbers::pi / 180.0;
constexpr double rad_to_deg = 180.0 / std::numbers::pi;

}  // namespace

Vec3 az_el_to_normal(double azimuth_deg, double elevation_deg) {
    if (!(elevation_deg >= -90.0 && elevation_deg <= 90.0)) {
        throw std::domain_error("az_el_to_normal: elevation_deg must be within [-90, 90]");
    }
    if (elevation_deg == 90.0) return {0.0, 0.0, 1.0};
    if (elevation_deg == -90.0) return {0.0, 0.0, -1.0};
    const double az = azimuth_deg * deg_to_rad;
    const double el = elevation_deg * deg_to_rad;
    return {std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
}

void direction_to_az_el(const Vec3& direction, double& azimuth_deg, double& elevation_deg) {
    const double horizontal = std::hypot(direction.x, direction.y);
    elevation_deg = std::atan2(direction.z, horizontal) * rad_to_deg;
    double az = std::atan2(direction.y, direction.x) * rad_to_deg;
    if (az < 0.0) az += 360.0;
    if (az >= 360.0) az = 0.0;
    azimuth_deg = az;
}

double lambertian_order_from_half_angle(double half_power_semi_angle_deg) {
    if (!(half_power_semi_angle_deg > 0.0 && half_power_semi_angle_deg < 90.0)) {
        throw std::domain_error(
            "lambertian_order_from_half_angle: semi-angle must be within (0, 90)");
    }
    return -std::numbers::ln2 / std::log(std::cos(half_power_semi_angle_deg * deg_to_rad));
}

namespace {

// Tiles one rectangular surface. u_dir/v_dir span the surface from `origin`;
// edge elements shrink so the total tiled area is exact.
void tile_surface(std::vector<SurfaceElement>& out, const Vec3& origin, const Vec3& u_dir,
                  double u_extent, const Vec3& v_dir, double v_extent, const Vec3& normal,
                  double size, double reflectivity, double order) {
    const auto count = [size](double extent) {
        return static_cast<int>(std::ceil(extent / size - 1e-9));
    };
    const int nu = count(u_extent);
    const int nv = count(v_extent);
    out.reserve(out.size() + static_cast<std::size_t>(nu) * static_cast<std::size_t>(nv));
    for (int j = 0; j < nv; ++j) {
        const double wv = (j + 1 == nv) ? v_extent - j * size : size;
        const double cv = j * size + wv / 2.0;
        for (int i = 0; i < nu; ++i) {
            const double wu = (i + 1 == nu) ? u_extent - i * size : size;
            const double cu = i * size + wu / 2.0;
            out.push_back(SurfaceElement{origin + u_dir * cu + v_dir * cv, normal, wu * wv,
                                         reflectivity, order});
        }
    }
}

std::vector<SurfaceElement> tile_room(const Room& room, double size) {
    std::vector<SurfaceElement> elements;
    const double w = room.width_m;
    const double l = room.length_m;
    const double h = room.height_m;
    const double n = room.reflector_order;
    // ceiling
    tile_surface(elements, {0, 0, h}, {1, 0, 0}, w, {0, 1, 0}, l, {0, 0, -1}, size,
                 room.reflectivity_ceiling, n);
    // floor
    tile_surface(elements, {0, 0, 0}, {1, 0, 0}, w, {0, 1, 0}, l, {0, 0, 1}, size,
                 room.reflectivity_floor, n);
    // walls x = 0 and x = width
    tile_surface(elements, {0, 0, 0}, {0, 1, 0}, l, {0, 0, 1}, h, {1, 0, 0}, size,
                 room.reflectivity_walls, n);
    tile_surface(elements, {w, 0, 0}, {0, 1, 0}, l, {0, 0, 1}, h, {-1, 0, 0}, size,
                 room.reflectivity_walls, n);
    // walls y = 0 and y = length
    tile_surface(elements, {0, 0, 0}, {1, 0, 0}, w, {0, 0, 1}, h, {0, 1, 0}, size,
                 room.reflectivity_walls, n);
    tile_surface(elements, {0, l, 0}, {1, 0, 0}, w, {0, 0, 1}, h, {0, -1, 0}, size,
                 room.reflectivity_walls, n);
    return elements;
}

void validate_room(const Room& room) {
    if (!(room.length_m > 0.0)) throw ScenarioError("room.length_m must be > 0");
    if (!(room.width_m > 0.0)) throw ScenarioError("room.width_m must be > 0");
    if (!(room.height_m > 0.0)) throw ScenarioError("room.height_m must be > 0");
    const auto check_rho = [](double rho, const char* name) {
        if (!(rho >= 0.0 && rho <= 1.0)) {
            throw ScenarioError(std::string("room.") + name + " must be within [0, 1]");
        }
    };
    check_rho(room.reflectivity_ceiling, "reflectivity_ceiling");
    check_rho(room.reflectivity_walls, "reflectivity_walls");
    check_rho(room.reflectivity_floor, "reflectivity_floor");
    if (!(room.reflector_order >= 0.0)) throw ScenarioError("room.reflector_order must be >= 0");
    const double min_dim = std::min({room.length_m, room.width_m, room.height_m});
    const auto check_size = [min_dim](double size, const char* name) {
        if (!(size > 0.0 && size <= min_dim)) {
            throw ScenarioError(std::string("room.") + name +
                                " must be > 0 and <= the smallest room dimension");
        }
    };
    check_size(room.element_size_first_m, "element_size_first_m");
    check_size(room.element_size_second_m, "element_size_second_m");
    if (!(room.comm_floor_height_m >= 0.0 && room.comm_floor_height_m < room.height_m)) {
        throw ScenarioError("room.comm_floor_height_m must be within [0, height_m)");
    }
}

bool inside_footprint(const Room& room, const Vec3& p) {
    return p.x >= 0.0 && p.x <= room.width_m && p.y >= 0.0 && p.y <= room.length_m;
}

}  // namespace

RoomSurfaces build_room(const Room& room) {
    validate_room(room);
    return RoomSurfaces{tile_room(room, room.element_size_first_m),
                        tile_room(room, room.element_size_second_m)};
}

ReceiverUnit make_receiver_unit(const Vec3& center) {
    ReceiverUnit unit;
    unit.center = center;
    const double azimuths[4] = {45.0, 135.0, 225.0, 315.0};
    for (int i = 0; i < 4; ++i) {
        DetectorBranch& b = unit.branches[static_cast<std::size_t>(i)];
        b.position = center;
        b.azimuth_deg = azimuths[i];
        b.elevation_deg = -70.0;
        b.normal = az_el_to_normal(b.azimuth_deg, b.elevation_deg);
        b.area_m2 = 4.0e-6;
        b.fov_deg = 21.0;
        b.responsivity_a_per_w = 0.4;
    }
    return unit;
}

Scenario default_scenario() {
    Scenario s;
    s.room = Room{};
    s.transmitter = Transmitter{};
    s.transmitter.lambertian_order_wide =
        lambertian_order_from_half_angle(s.transmitter.semi_angle_deg);
    for (double x : {1.0, 3.0}) {
        for (double y : {1.0, 3.0, 5.0, 7.0}) {
            s.receiver_units.push_back(make_receiver_unit({x, y, s.room.height_m}));
        }
    }
    s.noise = NoiseConfig{};
    s.bit_rate_bps = 3.57e9;
    s.steering = SteeringConfig{};
    validate(s);
    return s;
}

void validate(const Scenario& s) {
    validate_room(s.room);

    const Transmitter& tx = s.transmitter;
    if (!(tx.power_w > 0.0)) throw ScenarioError("transmitter.power_w must be > 0");
    if (!(tx.semi_angle_deg > 0.0 && tx.semi_angle_deg < 90.0)) {
        throw ScenarioError("transmitter.semi_angle_deg must be within (0, 90)");
    }
    if (!(tx.lambertian_order_wide >= 0.0)) {
        throw ScenarioError("transmitter.lambertian_order_wide must be >= 0");
    }
    if (std::abs(norm(tx.orientation) - 1.0) > 1e-9) {
        throw ScenarioError("transmitter.orientation must be a unit vector");
    }
    if (!inside_footprint(s.room, tx.position)) {
        throw ScenarioError("transmitter.position must lie inside the room footprint");
    }
    if (std::abs(tx.position.z - s.room.comm_floor_height_m) > 1e-9) {
        throw ScenarioError("transmitter.position.z must equal room.comm_floor_height_m");
    }

    for (std::size_t u = 0; u < s.receiver_units.size(); ++u) {
        const ReceiverUnit& unit = s.receiver_units[u];
        const std::string tag = "receivers.units[" + std::to_string(u) + "]";
        if (std::abs(unit.center.z - s.room.height_m) > 1e-9) {
            throw ScenarioError(tag + ".center must lie on the ceiling plane");
        }
        if (!inside_footprint(s.room, unit.center)) {
            throw ScenarioError(tag + ".center must lie inside the room footprint");
        }
        for (std::size_t j = 0; j < unit.branches.size(); ++j) {
            const DetectorBranch& b = unit.branches[j];
            const std::string btag = tag + ".branches[" + std::to_string(j) + "]";
            if (!(b.position == unit.center)) {
                throw ScenarioError(btag + ".position must equal the unit center");
            }
            if (!(b.area_m2 > 0.0)) throw ScenarioError(btag + ".area_m2 must be > 0");
            if (!(b.fov_deg > 0.0 && b.fov_deg <= 90.0)) {
                throw ScenarioError(btag + ".fov_deg must be within (0, 90]");
            }
            if (!(b.responsivity_a_per_w > 0.0)) {
                throw ScenarioError(btag + ".responsivity_a_per_w must be > 0");
            }
            if (!(b.elevation_deg >= -90.0 && b.elevation_deg <= 90.0)) {
                throw ScenarioError(btag + ".elevation_deg must be within [-90, 90]");
            }
            const Vec3 expected = az_el_to_normal(b.azimuth_deg, b.elevation_deg);
            const Vec3 diff = b.normal - expected;
            if (norm(diff) > 1e-9) {
                throw ScenarioError(btag + ".normal must match (azimuth_deg, elevation_deg)");
            }
        }
    }

    if (!(s.noise.background_current_a >= 0.0)) {
        throw ScenarioError("noise.background_current_a must be >= 0");
    }
    if (!(s.noise.preamp_noise_density_a_per_sqrt_hz >= 0.0)) {
        throw ScenarioError("noise.preamp_noise_density_a_per_sqrt_hz must be >= 0");
    }
    if (!(s.noise.electron_charge_c > 0.0)) {
        throw ScenarioError("noise.electron_charge_c must be > 0");
    }
    if (!(s.bit_rate_bps > 0.0)) throw ScenarioError("signaling.bit_rate_bps must be > 0");

    const double coverage_side = 2.0 * (s.room.height_m - tx.position.z) *
                                 std::tan(tx.semi_angle_deg * deg_to_rad);
    if (!(s.steering.stop_size_m > 0.0 && s.steering.stop_size_m < coverage_side)) {
        throw ScenarioError("steering.stop_size_m must be within (0, initial coverage side)");
    }
    if (!(s.steering.steered_divergence_deg > 0.0 && s.steering.steered_divergence_deg < 90.0)) {
        throw ScenarioError("steering.steered_divergence_deg must be within (0, 90)");
    }
}

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ScenarioError("unknown key '" + path + item.key() + "'");
        }
    }
}

double get_number(const json& obj, const std::string& path, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) throw ScenarioError("'" + path + key + "' must be a number");
    return v.get<double>();
}

bool get_bool(const json& obj, const std::string& path, const char* key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) throw ScenarioError("'" + path + key + "' must be a boolean");
    return v.get<bool>();
}

Vec3 get_vec3(const json& obj, const std::string& path, const char* key, const Vec3& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
        !v[2].is_number()) {
        throw ScenarioError("'" + path + key + "' must be an array of 3 numbers");
    }
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

DetectorBranch parse_branch(const json& obj, const std::string& path, const Vec3& center,
                            const DetectorBranch& defaults) {
    check_keys(obj, path,
               {"azimuth_deg", "elevation_deg", "fov_deg", "area_m2", "responsivity_a_per_w"});
    DetectorBranch b = defaults;
    b.position = center;
    b.azimuth_deg = get_number(obj, path, "azimuth_deg", defaults.azimuth_deg);
    b.elevation_deg = get_number(obj, path, "elevation_deg", defaults.elevation_deg);
    b.fov_deg = get_number(obj, path, "fov_deg", defaults.fov_deg);
    b.area_m2 = get_number(obj, path, "area_m2", defaults.area_m2);
    b.responsivity_a_per_w = get_number(obj, path, "responsivity_a_per_w",
                                        defaults.responsivity_a_per_w);
    if (!(b.elevation_deg >= -90.0 && b.elevation_deg <= 90.0)) {
        throw ScenarioError("'" + path + "elevation_deg' must be within [-90, 90]");
    }
    b.normal = az_el_to_normal(b.azimuth_deg, b.elevation_deg);
    return b;
}

}  // namespace

Scenario load_scenario(const std::string& text) {
    Scenario s = default_scenario();

    std::string trimmed = text;
    trimmed.erase(0, trimmed.find_first_not_of(" \t\r\n"));
    if (trimmed.empty()) return s;

    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("scenario parse error: ") + e.what());
    }
    if (!doc.is_object()) throw ScenarioError("scenario document must be a JSON object");
    check_keys(doc, "", {"room", "transmitter", "receivers", "noise", "signaling", "steering"});

    if (doc.contains("room")) {
        const json& r = doc.at("room");
        const std::string p = "room.";
        check_keys(r, p,
                   {"length_m", "width_m", "height_m", "reflectivity_ceiling",
                    "reflectivity_walls", "reflectivity_floor", "reflector_order",
                    "element_size_first_m", "element_size_second_m", "comm_floor_height_m"});
        Room& room = s.room;
        room.length_m = get_number(r, p, "length_m", room.length_m);
        room.width_m = get_number(r, p, "width_m", room.width_m);
        room.height_m = get_number(r, p, "height_m", room.height_m);
        room.reflectivity_ceiling = get_number(r, p, "reflectivity_ceiling",
                                               room.reflectivity_ceiling);
        room.reflectivity_walls = get_number(r, p, "reflectivity_walls", room.reflectivity_walls);
        room.reflectivity_floor = get_number(r, p, "reflectivity_floor", room.reflectivity_floor);
        room.reflector_order = get_number(r, p, "reflector_order", room.reflector_order);
        room.element_size_first_m = get_number(r, p, "element_size_first_m",
                                               room.element_size_first_m);
        room.element_size_second_m = get_number(r, p, "element_size_second_m",
                                                room.element_size_second_m);
        room.comm_floor_height_m = get_number(r, p, "comm_floor_height_m",
                                              room.comm_floor_height_m);
        // Keep defaults consistent with a resized room.
        s.transmitter.position.z = room.comm_floor_height_m;
        for (ReceiverUnit& unit : s.receiver_units) {
            unit.center.z = room.height_m;
            for (DetectorBranch& b : unit.branches) b.position = unit.center;
        }
    }

    bool wide_order_given = false;
    if (doc.contains("transmitter")) {
        const json& t = doc.at("transmitter");
        const std::string p = "transmitter.";
        check_keys(t, p,
                   {"position", "orientation", "power_w", "semi_angle_deg",
                    "lambertian_order_wide"});
        Transmitter& tx = s.transmitter;
        tx.position = get_vec3(t, p, "position", tx.position);
        tx.orientation = get_vec3(t, p, "orientation", tx.orientation);
        tx.power_w = get_number(t, p, "power_w", tx.power_w);
        tx.semi_angle_deg = get_number(t, p, "semi_angle_deg", tx.semi_angle_deg);
        wide_order_given = t.contains("lambertian_order_wide");
        if (wide_order_given) {
            tx.lambertian_order_wide = get_number(t, p, "lambertian_order_wide", 0.0);
        }
    }
    if (!wide_order_given) {
        s.transmitter.lambertian_order_wide =
            lambertian_order_from_half_angle(s.transmitter.semi_angle_deg);
    }

    if (doc.contains("receivers")) {
        const json& r = doc.at("receivers");
        check_keys(r, "receivers.", {"units"});
        if (r.contains("units")) {
            const json& units = r.at("units");
            if (!units.is_array()) throw ScenarioError("'receivers.units' must be an array");
            s.receiver_units.clear();
            const ReceiverUnit proto = make_receiver_unit({0.0, 0.0, s.room.height_m});
            for (std::size_t u = 0; u < units.size(); ++u) {
                const json& uj = units[u];
                const std::string up = "receivers.units[" + std::to_string(u) + "].";
                check_keys(uj, up, {"center", "branches"});
                if (!uj.contains("center")) {
                    throw ScenarioError("'" + up + "center' is required");
                }
                ReceiverUnit unit;
                unit.center = get_vec3(uj, up, "center", {});
                if (uj.contains("branches")) {
                    const json& bs = uj.at("branches");
                    if (!bs.is_array() || bs.size() != 4) {
                        throw ScenarioError("'" + up + "branches' must be an array of 4 branches");
                    }
                    for (std::size_t j = 0; j < 4; ++j) {
                        const std::string bp = up + "branches[" + std::to_string(j) + "].";
                        unit.branches[j] = parse_branch(bs[j], bp, unit.center, proto.branches[j]);
                    }
                } else {
                    unit = make_receiver_unit(unit.center);
                }
                s.receiver_units.push_back(unit);
            }
        }
    }

    if (doc.contains("noise")) {
        const json& n = doc.at("noise");
        const std::string p = "noise.";
        check_keys(n, p,
                   {"background_current_a", "preamp_noise_density_a_per_sqrt_hz",
                    "electron_charge_c"});
        s.noise.background_current_a = get_number(n, p, "background_current_a",
                                                  s.noise.background_current_a);
        s.noise.preamp_noise_density_a_per_sqrt_hz =
            get_number(n, p, "preamp_noise_density_a_per_sqrt_hz",
                       s.noise.preamp_noise_density_a_per_sqrt_hz);
        s.noise.electron_charge_c = get_number(n, p, "electron_charge_c",
                                               s.noise.electron_charge_c);
    }

    if (doc.contains("signaling")) {
        const json& sg = doc.at("signaling");
        check_keys(sg, "signaling.", {"bit_rate_bps"});
        s.bit_rate_bps = get_number(sg, "signaling.", "bit_rate_bps", s.bit_rate_bps);
    }

    if (doc.contains("steering")) {
        const json& st = doc.at("steering");
        const std::string p = "steering.";
        check_keys(st, p, {"stop_size_m", "steered_divergence_deg", "probe_fills_subquadrant"});
        s.steering.stop_size_m = get_number(st, p, "stop_size_m", s.steering.stop_size_m);
        s.steering.steered_divergence_deg = get_number(st, p, "steered_divergence_deg",
                                                       s.steering.steered_divergence_deg);
        s.steering.probe_fills_subquadrant = get_bool(st, p, "probe_fills_subquadrant",
                                                      s.steering.probe_fills_subquadrant);
    }

    validate(s);
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_scenario(buffer.str());
}

}  // namespace owsim
