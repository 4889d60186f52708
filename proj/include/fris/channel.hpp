// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "fris/config.hpp"
#include "fris/types.hpp"

namespace fris {

/// 2-D coordinates of all N fRIS elements inside the region [0,A]^2.
/// Stored as an N x 2 matrix (row n = element n).
struct PositionSet {
    MatR p;  // N x 2, meters

    int size() const { return int(p.rows()); }
    Vec2 at(int n) const { return p.row(n).transpose(); }

    double min_pair_distance() const;
    bool feasible(double A, double DeltaD, double tol = 1e-9) const;
};

/// Angles of all propagation endpoints in the fRIS local frame.
/// Azimuth is measured in the horizontal plane from the local y axis toward
/// the x axis; elevation from the height offset. Targets bypass geometry.
struct GeometryAngles {
    double phi_r = 0, psi_r = 0;  // BS as seen from the fRIS
    double phi_t = 0;             // fRIS as seen from the BS ULA
    std::vector<double> phi_c, psi_c;  // users as seen from the fRIS
};

struct ChannelSet {
    MatC G;        // N x M, rank-1 LoS channel BS -> fRIS
    MatC H_rc;     // N x K, fRIS -> users
    MatC A_rc;     // N x K steering-vector stack
    VecR Sigma_rc; // K path-gain amplitudes sqrt(zeta_k)
    double zeta_G = 0;
    GeometryAngles angles;
};

// Eq-level primitives -------------------------------------------------------

// p_x sin(phi) cos(psi) + p_y sin(psi)
double path_difference(const Vec2& p, double phi, double psi);

// Entry n = exp(j 2pi/lambda * d_n(phi, psi, p_n)).
VecC fris_steering(const PositionSet& positions, double phi, double psi, double lambda);

// Half-wavelength ULA: entry m = exp(j pi m sin(phi_t)), m = 0..M-1.
VecC ula_steering(double phi_t, int M);

// eta / dist^2; throws std::domain_error for dist <= 0.
double path_gain(double dist, double eta);

// Angle extraction from 3-D geometry (see GeometryAngles for the frame).
GeometryAngles derive_angles(const SystemConfig& cfg);

// Assembles G, H_rc and friends from scenario geometry and element positions.
ChannelSet build_channels(const SystemConfig& cfg, const PositionSet& positions);

}  // namespace fris
