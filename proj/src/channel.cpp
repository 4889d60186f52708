// SPDX-License-Identifier: Apache-2.0
#include "fris/channel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fris {

double PositionSet::min_pair_distance() const {
    const int n = size();
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            best = std::min(best, (p.row(i) - p.row(j)).norm());
    return best;
}

bool PositionSet::feasible(double A, double DeltaD, double tol) const {
    if (p.minCoeff() < -tol || p.maxCoeff() > A + tol) return false;
    return size() < 2 || min_pair_distance() >= DeltaD - tol;
}

double path_difference(const Vec2& p, double phi, double psi) {
    return p[0] * std::sin(phi) * std::cos(psi) + p[1] * std::sin(psi);
}

VecC fris_steering(const PositionSet& positions, double phi, double psi, double lambda) {
    const int n = positions.size();
    const double k0 = 2.0 * kPi / lambda;
    VecC a(n);
    for (int i = 0; i < n; ++i) {
        double d = path_difference(positions.at(i), phi, psi);
        a[i] = std::polar(1.0, k0 * d);
    }
    return a;
}

VecC ula_steering(double phi_t, int M) {
    if (M < 1) throw std::domain_error("ula_steering: M must be >= 1");
    VecC a(M);
    for (int m = 0; m < M; ++m) a[m] = std::polar(1.0, kPi * m * std::sin(phi_t));
    return a;
}

double path_gain(double dist, double eta) {
    if (dist <= 0.0) throw std::domain_error("path_gain: dist must be > 0");
    return eta / (dist * dist);
}

namespace {

// Azimuth in the horizontal plane from local y toward x; elevation from z.
void spherical_from_fris(const Vec3& from, const Vec3& to, double& phi, double& psi) {
    Vec3 d = to - from;
    double r = d.norm();
    if (r <= 0.0) throw std::domain_error("derive_angles: coincident node positions");
    psi = std::asin(d[2] / r);
    phi = std::atan2(d[0], d[1]);
}

}  // namespace

GeometryAngles derive_angles(const SystemConfig& cfg) {
    GeometryAngles g;
    spherical_from_fris(cfg.fris_pos, cfg.bs_pos, g.phi_r, g.psi_r);
    // BS ULA departure angle toward the fRIS: sine of the local y component.
    Vec3 e = cfg.fris_pos - cfg.bs_pos;
    double r = e.norm();
    if (r <= 0.0) throw std::domain_error("derive_angles: coincident node positions");
    g.phi_t = std::asin(e[1] / r);
    g.phi_c.resize(cfg.user_pos.size());
    g.psi_c.resize(cfg.user_pos.size());
    for (size_t k = 0; k < cfg.user_pos.size(); ++k)
        spherical_from_fris(cfg.fris_pos, cfg.user_pos[k], g.phi_c[k], g.psi_c[k]);
    return g;
}

ChannelSet build_channels(const SystemConfig& cfg, const PositionSet& positions) {
    if (int(cfg.user_pos.size()) != cfg.K)
        throw std::invalid_argument("build_channels: user_pos not placed (expected K entries)");
    ChannelSet ch;
    ch.angles = derive_angles(cfg);
    ch.zeta_G = path_gain((cfg.bs_pos - cfg.fris_pos).norm(), cfg.eta);

    VecC a_r = fris_steering(positions, ch.angles.phi_r, ch.angles.psi_r, cfg.lambda);
    VecC a_t = ula_steering(ch.angles.phi_t, cfg.M);
    ch.G = std::sqrt(ch.zeta_G) * a_r * a_t.adjoint();

    const int K = cfg.K;
    ch.A_rc.resize(positions.size(), K);
    ch.Sigma_rc.resize(K);
    for (int k = 0; k < K; ++k) {
        double dist = (cfg.user_pos[k] - cfg.fris_pos).norm();
        ch.Sigma_rc[k] = std::sqrt(path_gain(dist, cfg.eta));
        ch.A_rc.col(k) =
            fris_steering(positions, ch.angles.phi_c[k], ch.angles.psi_c[k], cfg.lambda);
    }
    ch.H_rc = ch.A_rc * ch.Sigma_rc.asDiagonal();
    return ch;
}

}  // namespace fris
