// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fris/types.hpp"

namespace fris {

/// All scenario constants. Everything is stored in linear units (watts,
/// meters, radians); dB-valued inputs are converted at parse time.
struct SystemConfig {
    int M = 8;   // BS antenna count
    int N = 16;  // fRIS element count
    int K = 4;   // user count
    int T = 3;   // target count

    double lambda = 0.125;      // carrier wavelength [m] (2.4 GHz)
    double P_t = 0.01;          // transmit power budget [W] (10 dBm)
    double sigma0_sq = 1e-9;    // receiver noise power [W] (-60 dBm)
    double alpha = 0.5;         // sensing/communication weight
    double A = 0.5;             // region side length [m] (4 lambda)
    double DeltaD = 0.0625;     // minimum inter-element spacing [m] (lambda/2)
    double eta = 0.1;           // path-loss coefficient (-10 dB)

    Vec3 bs_pos{3.0, 0.0, 0.0};
    Vec3 fris_pos{0.0, 3.0, 3.0};
    Vec3 user_center{30.0, 100.0, 0.0};
    double user_radius = 10.0;
    // Per-trial user placement; empty until place_users() or explicit config.
    std::vector<Vec3> user_pos;

    // Target (azimuth, elevation) pairs in radians, as seen from the fRIS.
    std::vector<Vec2> target_angles{
        {deg2rad(-60.0), 0.0}, {deg2rad(10.0), 0.0}, {deg2rad(55.0), 0.0}};
    double mainlobe_width_deg = 10.0;

    int I_a = 181;  // azimuth grid count
    int I_e = 1;    // elevation grid count
    double az_min_deg = -90.0, az_max_deg = 90.0;
    double el_min_deg = 0.0, el_max_deg = 0.0;

    double am_tol = 1e-5;    // outer AM convergence threshold
    double alm_tol = 1e-7;   // ALM feasibility threshold (1e-5 * P_t)
    double dps_spacing = 0.03125;  // DPS grid spacing [m] (lambda/4)
    bool shuffle_position_order = false;

    std::uint64_t seed = 1;

    // Throws std::invalid_argument naming the offending field.
    void validate() const;

    // Draws K user positions uniformly in the disc of user_radius around
    // user_center (z fixed), overwriting user_pos.
    void place_users(Rng& rng);
};

enum class SchemeKind { Proposed, Conven, DPS, Rand };

const char* scheme_name(SchemeKind s);
SchemeKind scheme_from_name(const std::string& name);

enum class ExperimentKind { Convergence, NSweep, Beampattern, Ber, RegionSweep, Table1 };

const char* experiment_name(ExperimentKind k);
ExperimentKind experiment_from_name(const std::string& name);

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::Convergence;
    std::vector<SchemeKind> schemes{SchemeKind::Proposed, SchemeKind::Conven,
                                    SchemeKind::DPS, SchemeKind::Rand};
    std::vector<double> sweep;  // kind-dependent (N values, noise dBm, A/lambda)
    int trials = 20;
    std::string out_dir = "out";
    std::uint64_t seed = 1;

    void validate() const;
};

struct ParsedConfig {
    SystemConfig system;
    ExperimentSpec experiment;
};

// Strict-schema JSON ingestion. Unknown keys are rejected; dB-suffixed string
// values ("10dBm", "-10dB") are converted to linear. Throws
// std::invalid_argument with the offending key on any violation.
ParsedConfig parse_config_text(const std::string& json_text);
ParsedConfig parse_config_file(const std::string& path);

// Canonical serialization of the system config + experiment spec; the FNV-1a
// hash of this string is the manifest's config hash.
std::string canonical_config_string(const ParsedConfig& cfg);
std::uint64_t config_hash(const ParsedConfig& cfg);

// "10dBm" -> watts, "-10dB" -> linear ratio, plain number -> as-is.
double parse_power_value(const std::string& text, const std::string& key);

}  // namespace fris
