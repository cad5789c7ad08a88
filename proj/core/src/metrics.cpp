// SPDX-License-Identifier: Apache-2.0
//
// owsim — indoor optical wireless uplink simulator
// Copyright (c) 2026 owsim contributors

#include "owsim/metrics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "owsim/format.hpp"

namespace owsim {

double total_power(const ImpulseResponse& ir, int branch_id) {
    if (branch_id < 0 || branch_id >= ir.branch_count()) {
        throw std::domain_error("total_power: unknown branch id");
    }
    double sum = 0.0;
    for (const PathContribution& c : ir.branch(branch_id)) sum += c.power_w;
    return sum;
}

double rms_delay_spread(const ImpulseResponse& ir, int branch_id) {
    if (branch_id < 0 || branch_id >= ir.branch_count()) {
        throw std::domain_error("rms_delay_spread: unknown branch id");
    }
    const auto taps = ir.branch(branch_id);
    double peak = 0.0;
    for (const PathContribution& c : taps) peak = std::max(peak, c.power_w);
    if (!(peak > 0.0)) {
        throw std::domain_error("rms_delay_spread: branch has no positive-power contribution");
    }
    // Weights are normalized by the peak before squaring; this keeps tiny
    // taps from underflowing and makes the spread exactly scale-invariant.
    double weight_sum = 0.0;
    double moment = 0.0;
    for (const PathContribution& c : taps) {
        const double r = c.power_w / peak;
        const double w = r * r;
        weight_sum += w;
        moment += c.delay_s * w;
    }
    const double mean = moment / weight_sum;
    double variance = 0.0;
    for (const PathContribution& c : taps) {
        const double r = c.power_w / peak;
        const double dt = c.delay_s - mean;
        variance += dt * dt * (r * r);
    }
    return std::sqrt(variance / weight_sum);
}

std::pair<double, double> bit_slot_powers(const ImpulseResponse& ir, int branch_id,
                                          double bit_rate_bps) {
    if (!(bit_rate_bps > 0.0)) {
        throw std::domain_error("bit_slot_powers: bit rate must be > 0");
    }
    if (branch_id < 0 || branch_id >= ir.branch_count()) {
        throw std::domain_error("bit_slot_powers: unknown branch id");
    }
    const auto taps = ir.branch(branch_id);
    if (taps.empty()) {
        throw std::domain_error("bit_slot_powers: branch has no contributions");
    }
    const double slot_end = taps.front().delay_s + 1.0 / bit_rate_bps;
    double ps1 = 0.0;
    double ps0 = 0.0;
    double total = 0.0;
    for (const PathContribution& c : taps) {
        total += c.power_w;
        if (c.delay_s < slot_end) {
            ps1 += c.power_w;
        } else {
            ps0 += c.power_w;
        }
    }
    // Nudge the ISI term within an ulp so the pair partitions the in-order
    // total exactly. A representable complement always exists when the first
    // slot holds at least half the power, which every traced response does;
    // otherwise the sum may stay one ulp high (round-to-even can skip an odd
    // total from both sides).
    while (ps1 + ps0 > total && ps0 > 0.0) {
        ps0 = std::nextafter(ps0, -std::numeric_limits<double>::infinity());
    }
    while (ps1 + ps0 < total) {
        ps0 = std::nextafter(ps0, std::numeric_limits<double>::infinity());
    }
    return {ps1, ps0};
}

double noise_std(const NoiseConfig& noise, double responsivity_a_per_w, double received_power_w,
                 double bandwidth_hz) {
    if (!(bandwidth_hz > 0.0)) throw std::domain_error("noise_std: bandwidth must be > 0");
    const double shot = 2.0 * noise.electron_charge_c *
                        (noise.background_current_a + responsivity_a_per_w * received_power_w) *
                        bandwidth_hz;
    const double preamp = noise.preamp_noise_density_a_per_sqrt_hz *
                          noise.preamp_noise_density_a_per_sqrt_hz * bandwidth_hz;
    return std::sqrt(shot + preamp);
}

double snr_ook(double ps1_w, double ps0_w, double responsivity_a_per_w, double sigma1_a,
               double sigma0_a) {
    if (!(ps1_w >= ps0_w)) throw std::invalid_argument("snr_ook: requires ps1 >= ps0");
    const double noise = sigma1_a + sigma0_a;
    if (!(noise > 0.0)) throw std::domain_error("snr_ook: total noise must be > 0");
    const double q = responsivity_a_per_w * (ps1_w - ps0_w) / noise;
    return q * q;
}

double ber_from_snr(double snr_linear) {
    if (!(snr_linear >= 0.0)) throw std::domain_error("ber_from_snr: snr must be >= 0");
    return 0.5 * std::erfc(std::sqrt(snr_linear) / std::numbers::sqrt2);
}

std::pair<int, double> select_best_branch(std::span<const double> snr_linear) {
    if (snr_linear.empty()) throw std::domain_error("select_best_branch: no branches");
    int best = 0;
    for (int i = 1; i < static_cast<int>(snr_linear.size()); ++i) {
        if (snr_linear[static_cast<std::size_t>(i)] >
            snr_linear[static_cast<std::size_t>(best)]) {
            best = i;
        }
    }
    return {best, snr_linear[static_cast<std::size_t>(best)]};
}

LinkMetrics link_metrics(const ImpulseResponse& ir, const Scenario& scenario) {
    const int n = ir.branch_count();
    LinkMetrics lm;
    lm.branches.resize(static_cast<std::size_t>(n));
    std::vector<double> snrs(static_cast<std::size_t>(n), 0.0);
    for (int b = 0; b < n; ++b) {
        BranchMetrics& m = lm.branches[static_cast<std::size_t>(b)];
        if (ir.branch(b).empty()) {
            m = BranchMetrics{};
            m.snr_db = -std::numeric_limits<double>::infinity();
            continue;
        }
        const double responsivity = scenario.branch(b).responsivity_a_per_w;
        m.power_w = total_power(ir, b);
        m.delay_spread_s = rms_delay_spread(ir, b);
        const auto [ps1, ps0] = bit_slot_powers(ir, b, scenario.bit_rate_bps);
        m.ps1_w = ps1;
        m.ps0_w = ps0;
        const double sigma1 = noise_std(scenario.noise, responsivity, ps1, scenario.bit_rate_bps);
        const double sigma0 = noise_std(scenario.noise, responsivity, ps0, scenario.bit_rate_bps);
        // A branch whose first slot holds less power than the ISI tail has a
        // closed eye; report zero SNR rather than a negative eye opening.
        m.snr_linear = ps1 >= ps0 ? snr_ook(ps1, ps0, responsivity, sigma1, sigma0) : 0.0;
        m.snr_db = 10.0 * std::log10(m.snr_linear);
        m.ber = ber_from_snr(m.snr_linear);
        snrs[static_cast<std::size_t>(b)] = m.snr_linear;
    }
    if (n > 0) {
        const auto [best, best_snr] = select_best_branch(snrs);
        lm.best_branch_id = best;
        lm.best_snr_db = lm.branches[static_cast<std::size_t>(best)].snr_db;
        (void)best_snr;
    } else {
        lm.best_branch_id = 0;
        lm.best_snr_db = -std::numeric_limits<double>::infinity();
    }
    return lm;
}

void write_metrics_csv(std::ostream& out, const LinkMetrics& metrics, const Scenario& scenario) {
    out << "unit_id,branch_id,power_w,delay_spread_s,ps1_w,ps0_w,snr_db,ber\n";
    const auto row = [&out, &metrics](int unit, int branch) {
        const BranchMetrics& m = metrics.branches[static_cast<std::size_t>(branch)];
        out << unit << ',' << branch << ',' << format_double(m.power_w) << ','
            << format_double(m.delay_spread_s) << ',' << format_double(m.ps1_w) << ','
            << format_double(m.ps0_w) << ',' << format_double(m.snr_db) << ','
            << format_double(m.ber) << '\n';
    };
    const int n_units = static_cast<int>(scenario.receiver_units.size());
    for (int u = 0; u < n_units; ++u) {
        std::array<double, 4> unit_snrs{};
        for (int j = 0; j < 4; ++j) {
            const int b = 4 * u + j;
            unit_snrs[static_cast<std::size_t>(j)] =
                metrics.branches[static_cast<std::size_t>(b)].snr_linear;
            row(u, b);
        }
        const auto [best_local, snr] = select_best_branch(unit_snrs);
        (void)snr;
        row(u, 4 * u + best_local);
    }
}

}  // namespace owsim
