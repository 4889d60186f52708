// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "fris/channel.hpp"
#include "fris/types.hpp"

namespace fris {

/// Angular evaluation grid plus the ideal / actual beampatterns on it.
/// Patterns are I_a x I_e (azimuth-major).
struct BeampatternGrid {
    VecR azimuths;    // I_a, radians
    VecR elevations;  // I_e, radians
    MatR P_d;
    MatR P_s;
};

BeampatternGrid make_grid(const SystemConfig& cfg);

// Unit-height rectangular mainlobes of the given azimuth width centered on
// each target azimuth, placed on the grid row closest to the target
// elevation. Overlaps union.
MatR ideal_beampattern(const std::vector<Vec2>& target_angles, double mainlobe_width_deg,
                       const BeampatternGrid& grid);

// P_s(phi, psi) = a^H R_s a on every grid point; R_s must be Hermitian.
MatR beampattern(const MatC& R_s, const PositionSet& positions,
                 const BeampatternGrid& grid, double lambda);

// Eq-(4) style squared mismatch sum |beta P_d - P_s|^2.
double mismatch(double beta, const MatR& P_d, const MatR& P_s);

// Least-squares scale, clamped to beta_min = 1e-12. Requires sum P_d^2 > 0.
double optimal_beta(const MatR& P_d, const MatR& P_s);

struct SensingReference {
    VecC s_r;          // desired reflective signal, ||s_r||^2 = ||Gx||^2
    double beta = 0;   // final least-squares scale
    double lambda_s = 0;  // dominant eigenvalue of s_r s_r^H = ||s_r||^2
    double power = 0;     // ||Gx||^2
    double final_mismatch = 0;
};

// Sensing-only reference design: rank-one sphere parameterization of the
// covariance with alternating closed-form beta; best of `restarts` starts
// (plus `warm_start` when provided). Monotone in the mismatch per iteration.
SensingReference design_reference_signal(const MatC& G, const VecC& x, const MatR& P_d,
                                         const BeampatternGrid& grid,
                                         const PositionSet& positions, double lambda,
                                         Rng& rng, int restarts = 4,
                                         const VecC* warm_start = nullptr);

// ||s_r - Theta^H G x||^2
double sensing_mse(const VecC& s_r, const VecC& theta, const MatC& G, const VecC& x);

}  // namespace fris
