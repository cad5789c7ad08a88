// SPDX-License-Identifier: Apache-2.0
//
// owsim — indoor optical wireless uplink simulator
// Copyright (c) 2026 owsim contributors

#pragma once

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "owsim/raytrace.hpp"
#include "owsim/scene.hpp"

namespace owsim {

struct BranchMetrics {
    double power_w = 0.0;
    double delay_spread_s = 0.0;
    double ps1_w = 0.0;  // power arriving in the first bit slot
    double ps0_w = 0.0;  // power spilling into later slots (worst-case ISI)
    double snr_linear = 0.0;
    double snr_db = 0.0;
    double ber = 0.5;
};

struct LinkMetrics {
    std::vector<BranchMetrics> branches;  // indexed by global branch id
    int best_branch_id = 0;
    double best_snr_db = 0.0;
};

// Sum of path powers for one branch, accumulated in delay order.
double total_power(const ImpulseResponse& ir, int branch_id);

// Power-squared-weighted RMS spread of arrival times, computed on the exact
// contribution list. Throws std::domain_error for a branch with no positive
// power.
double rms_delay_spread(const ImpulseResponse& ir, int branch_id);

// Splits total power at one bit period past the first arrival: (in-slot,
// later-slots). The second value is nudged by at most one ulp so the pair
// partitions total_power exactly. Throws std::domain_error for an empty
// branch.
std::pair<double, double> bit_slot_powers(const ImpulseResponse& ir, int branch_id,
                                          double bit_rate_bps);

// Input-referred current noise: shot noise of background plus signal
// photocurrent, and preamplifier noise, over the given bandwidth.
double noise_std(const NoiseConfig& noise, double responsivity_a_per_w, double received_power_w,
                 double bandwidth_hz);

// Decision-point SNR of OOK with worst-case threshold placement:
// (R*(ps1-ps0)/(sigma1+sigma0))^2. Requires ps1 >= ps0 and nonzero noise.
double snr_ook(double ps1_w, double ps0_w, double responsivity_a_per_w, double sigma1_a,
               double sigma0_a);

// OOK bit error rate Q(sqrt(snr)).
double ber_from_snr(double snr_linear);

// Argmax over branch SNRs; ties resolve to the lowest branch id.
std::pair<int, double> select_best_branch(std::span<const double> snr_linear);

// Per-branch link figures for a traced impulse response at the scenario bit
// rate. Branches with no received power report zero power, -inf dB SNR and
// BER 0.5.
LinkMetrics link_metrics(const ImpulseResponse& ir, const Scenario& scenario);

// CSV dump: header unit_id,branch_id,power_w,delay_spread_s,ps1_w,ps0_w,snr_db,ber.
// Each unit emits its four branch rows followed by a summary row repeating the
// unit's best branch.
void write_metrics_csv(std::ostream& out, const LinkMetrics& metrics, const Scenario& scenario);

}  // namespace owsim
