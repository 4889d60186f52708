// SPDX-License-Identifier: Apache-2.0
#include "fris/sensing.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fris/numerics.hpp"

namespace fris {

namespace {

VecR linspace(double lo, double hi, int count) {
    VecR v(count);
    if (count == 1) {
        v[0] = lo;
        return v;
    }
    for (int i = 0; i < count; ++i) v[i] = lo + (hi - lo) * double(i) / double(count - 1);
    return v;
}

// N x (I_a * I_e) stack of grid steering vectors, azimuth-major.
MatC steering_stack(const PositionSet& positions, const BeampatternGrid& grid,
                    double lambda) {
    const int ia = int(grid.azimuths.size());
    const int ie = int(grid.elevations.size());
    MatC A(positions.size(), ia * ie);
    for (int i = 0; i < ia; ++i)
        for (int j = 0; j < ie; ++j)
            A.col(i * ie + j) = fris_steering(positions, grid.azimuths[i],
                                              grid.elevations[j], lambda);
    return A;
}

}  // namespace

BeampatternGrid make_grid(const SystemConfig& cfg) {
    BeampatternGrid g;
    g.azimuths = linspace(deg2rad(cfg.az_min_deg), deg2rad(cfg.az_max_deg), cfg.I_a);
    g.elevations = linspace(deg2rad(cfg.el_min_deg), deg2rad(cfg.el_max_deg), cfg.I_e);
    g.P_d = MatR::Zero(cfg.I_a, cfg.I_e);
    g.P_s = MatR::Zero(cfg.I_a, cfg.I_e);
    return g;
}

MatR ideal_beampattern(const std::vector<Vec2>& target_angles, double mainlobe_width_deg,
                       const BeampatternGrid& grid) {
    const int ia = int(grid.azimuths.size());
    const int ie = int(grid.elevations.size());
    MatR pd = MatR::Zero(ia, ie);
    const double half = deg2rad(mainlobe_width_deg) / 2.0;
    for (const auto& t : target_angles) {
        // elevation row closest to the target elevation
        int je = 0;
        double best = std::abs(grid.elevations[0] - t[1]);
        for (int j = 1; j < ie; ++j) {
            double d = std::abs(grid.elevations[j] - t[1]);
            if (d < best) { best = d; je = j; }
        }
        for (int i = 0; i < ia; ++i)
            if (std::abs(grid.azimuths[i] - t[0]) <= half + 1e-12) pd(i, je) = 1.0;
    }
    return pd;
}

MatR beampattern(const MatC& R_s, const PositionSet& positions,
                 const BeampatternGrid& grid, double lambda) {
    double scale = std::max(1.0, R_s.cwiseAbs().maxCoeff());
    if ((R_s - R_s.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw std::domain_error("beampattern: R_s must be Hermitian");
    const int ia = int(grid.azimuths.size());
    const int ie = int(grid.elevations.size());
    MatR ps(ia, ie);
    for (int i = 0; i < ia; ++i)
        for (int j = 0; j < ie; ++j) {
            VecC a = fris_steering(positions, grid.azimuths[i], grid.elevations[j], lambda);
            ps(i, j) = (a.dot(R_s * a)).real();
        }
    return ps;
}

double mismatch(double beta, const MatR& P_d, const MatR& P_s) {
    if (P_d.rows() != P_s.rows() || P_d.cols() != P_s.cols())
        throw std::invalid_argument("mismatch: grids do not conform");
    return (beta * P_d - P_s).squaredNorm();
}

double optimal_beta(const MatR& P_d, const MatR& P_s) {
    double denom = P_d.squaredNorm();
    if (denom <= 0.0) throw std::domain_error("optimal_beta: all-zero ideal pattern");
    const double beta_min = 1e-12;
    return std::max(P_d.cwiseProduct(P_s).sum() / denom, beta_min);
}

SensingReference design_reference_signal(const MatC& G, const VecC& x, const MatR& P_d,
                                         const BeampatternGrid& grid,
                                         const PositionSet& positions, double lambda,
                                         Rng& rng, int restarts, const VecC* warm_start) {
    const double power = (G * x).squaredNorm();
    if (power <= 0.0)
        throw std::domain_error("design_reference_signal: zero illumination power");
    const double radius = std::sqrt(power);

    MatC Asv = steering_stack(positions, grid, lambda);
    const int ngrid = int(Asv.cols());
    VecR pd(ngrid);
    {
        const int ie = int(grid.elevations.size());
        for (int i = 0; i < int(grid.azimuths.size()); ++i)
            for (int j = 0; j < ie; ++j) pd[i * ie + j] = P_d(i, j);
    }
    const double pd2 = pd.squaredNorm();
    const double beta_min = 1e-12;

    auto beta_of = [&](const VecR& q) {
        return pd2 > 0 ? std::max(pd.dot(q) / pd2, beta_min) : beta_min;
    };

    // Profiled objective: beta is re-fit inside every evaluation, so plain
    // descent on f is descent on the true mismatch with optimal scale.
    ComplexObjective f = [&](const VecC& s, VecC& grad) {
        VecC z = Asv.adjoint() * s;            // ngrid
        VecR q = z.cwiseAbs2();
        double beta = beta_of(q);
        VecR resid = q - beta * pd;
        VecC w = 2.0 * resid.cast<cdouble>().cwiseProduct(z);
        grad = Asv * w;
        return resid.squaredNorm();
    };

    // Deterministic start: ideal-pattern-weighted sum of grid steering vectors.
    VecC x0 = Asv * pd.cast<cdouble>();
    if (x0.norm() < 1e-14) x0 = VecC::Ones(positions.size());
    if (warm_start && warm_start->size() == positions.size() && warm_start->norm() > 0)
        x0 = *warm_start;

    // Run each start separately and filter out "energy-hiding" candidates:
    // when the steering Gram is near-singular the profiled-beta objective has
    // a vacuous global optimum (s in a near-null direction of the grid, so
    // P_s ~ 0 everywhere and beta -> 0 fits a zero pattern perfectly). Such a
    // reference radiates nothing toward the grid and is useless as a sensing
    // target, so candidates must put a minimal fraction of their power on the
    // grid before competing on mismatch.
    const double kMinGridEnergyRatio = 1e-3;
    auto grid_ratio = [&](const VecC& s) {
        return (Asv.adjoint() * s).squaredNorm() / (double(ngrid) * s.squaredNorm());
    };
    std::normal_distribution<double> gauss(0.0, 1.0);
    VecC s_r;
    double best_mm = std::numeric_limits<double>::infinity();
    VecC fallback;  // highest grid ratio, used only if every candidate hides
    double fallback_ratio = -1.0;
    for (int attempt = 0; attempt <= restarts; ++attempt) {
        VecC start = x0;
        if (attempt > 0) {
            start.resize(positions.size());
            for (int i = 0; i < start.size(); ++i)
                start[i] = cdouble(gauss(rng), gauss(rng));
        }
        VecC cand = sphere_constrained_min(f, radius, start, 0, rng, 1e-12, 5000);
        VecC g_unused;
        double mm = f(cand, g_unused);
        double ratio = grid_ratio(cand);
        if (ratio > fallback_ratio) {
            fallback_ratio = ratio;
            fallback = cand;
        }
        if (ratio >= kMinGridEnergyRatio && mm < best_mm) {
            best_mm = mm;
            s_r = cand;
        }
    }
    if (s_r.size() == 0) s_r = fallback;

    SensingReference out;
    out.s_r = s_r;
    out.power = power;
    out.lambda_s = s_r.squaredNorm();
    VecR q = (Asv.adjoint() * s_r).cwiseAbs2();
    out.beta = beta_of(q);
    out.final_mismatch = (q - out.beta * pd).squaredNorm();
    return out;
}

double sensing_mse(const VecC& s_r, const VecC& theta, const MatC& G, const VecC& x) {
    return (s_r - theta.conjugate().asDiagonal() * (G * x)).squaredNorm();
}

}  // namespace fris
