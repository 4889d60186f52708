// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "fris/sensing.hpp"
#include "test_util.hpp"

using namespace fris;
using namespace fris::testutil;

namespace {

BeampatternGrid default_grid(const SystemConfig& cfg) { return make_grid(cfg); }

MatC random_psd(int n, Rng& rng) {
    MatC B = random_complex_mat(n, n, rng);
    return B * B.adjoint();
}

}  // namespace

TEST_SUITE_BEGIN("sensing");

TEST_CASE("ideal_beampattern plateaus") {
    SystemConfig cfg;
    cfg.target_angles = {{deg2rad(10.0), 0.0}};
    BeampatternGrid grid = default_grid(cfg);
    MatR pd = ideal_beampattern(cfg.target_angles, 10.0, grid);
    for (int i = 0; i < cfg.I_a; ++i) {
        double az = rad2deg(grid.azimuths[i]);
        double want = (az >= 5.0 - 1e-9 && az <= 15.0 + 1e-9) ? 1.0 : 0.0;
        CHECK(pd(i, 0) == want);
    }

    MatR empty = ideal_beampattern({}, 10.0, grid);
    CHECK(empty.cwiseAbs().maxCoeff() == 0.0);

    SystemConfig paper;  // three disjoint unit plateaus at -60/10/55 degrees
    MatR pd3 = ideal_beampattern(paper.target_angles, 10.0, default_grid(paper));
    CHECK(pd3.sum() == doctest::Approx(33.0));  // 3 plateaus x 11 one-degree bins
    CHECK(pd3.maxCoeff() == 1.0);
}

TEST_CASE("beampattern quadratic form") {
    SystemConfig cfg;
    cfg.I_a = 21;
    BeampatternGrid grid = default_grid(cfg);
    Rng rng(5);
    PositionSet pos = rand_positions(cfg.N, cfg.A, cfg.DeltaD, rng);

    MatR ps = beampattern(MatC::Identity(cfg.N, cfg.N), pos, grid, cfg.lambda);
    for (int i = 0; i < cfg.I_a; ++i) CHECK(ps(i, 0) == doctest::Approx(double(cfg.N)));

    VecC a0 = fris_steering(pos, grid.azimuths[7], grid.elevations[0], cfg.lambda);
    ps = beampattern(a0 * a0.adjoint(), pos, grid, cfg.lambda);
    int argmax = 0;
    ps.col(0).maxCoeff(&argmax);
    CHECK(argmax == 7);
    CHECK(ps(7, 0) == doctest::Approx(double(cfg.N) * cfg.N));

    MatC R = random_psd(cfg.N, rng);
    ps = beampattern(R, pos, grid, cfg.lambda);
    for (int i = 0; i < cfg.I_a; ++i) {
        VecC a = fris_steering(pos, grid.azimuths[i], grid.elevations[0], cfg.lambda);
        CHECK(rel_err(ps(i, 0), (a.dot(R * a)).real()) < 1e-10);
        CHECK(ps(i, 0) > -1e-10);
    }

    MatC bad = random_complex_mat(cfg.N, cfg.N, rng);
    CHECK_THROWS_AS(beampattern(bad, pos, grid, cfg.lambda), std::domain_error);
}

TEST_CASE("mismatch and optimal_beta") {
    Rng rng(9);
    MatR pd = MatR::Random(11, 3).cwiseAbs();
    MatR ps = MatR::Random(11, 3).cwiseAbs();

    CHECK(mismatch(2.5, pd, 2.5 * pd) == doctest::Approx(0.0));
    CHECK(mismatch(1.0, MatR::Zero(11, 3), ps) == doctest::Approx(ps.squaredNorm()));

    double acc = 0;
    for (int i = 0; i < 11; ++i)
        for (int j = 0; j < 3; ++j) acc += std::pow(0.7 * pd(i, j) - ps(i, j), 2);
    CHECK(rel_err(mismatch(0.7, pd, ps), acc) < 1e-12);

    CHECK(optimal_beta(pd, 3.0 * pd) == doctest::Approx(3.0));

    MatR pd_disjoint = MatR::Zero(4, 1), ps_disjoint = MatR::Zero(4, 1);
    pd_disjoint(0, 0) = 1.0;
    ps_disjoint(2, 0) = 1.0;
    CHECK(optimal_beta(pd_disjoint, ps_disjoint) == doctest::Approx(1e-12));
    CHECK_THROWS_AS(optimal_beta(MatR::Zero(4, 1), ps_disjoint), std::domain_error);

    // golden-section oracle on beta
    double beta = optimal_beta(pd, ps);
    double lo = 0.0, hi = 10.0;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    while (hi - lo > 1e-12) {
        double m1 = hi - gr * (hi - lo), m2 = lo + gr * (hi - lo);
        if (mismatch(m1, pd, ps) < mismatch(m2, pd, ps)) hi = m2;
        else lo = m1;
    }
    CHECK(std::abs(beta - (lo + hi) / 2) < 1e-8);

    // true minimizer: +-1e-3 perturbations never decrease the mismatch
    double base = mismatch(beta, pd, ps);
    CHECK(mismatch(beta + 1e-3, pd, ps) >= base - 1e-15);
    CHECK(mismatch(beta - 1e-3, pd, ps) >= base - 1e-15);
}

TEST_CASE("design_reference_signal sphere constraint and descent") {
    SystemConfig cfg;
    cfg.N = 4;
    cfg.target_angles = {{deg2rad(10.0), 0.0}};
    Rng rng(3);
    cfg.place_users(rng);
    PositionSet pos = rand_positions(cfg.N, cfg.A, cfg.DeltaD, rng);
    ChannelSet ch = build_channels(cfg, pos);
    BeampatternGrid grid = make_grid(cfg);
    MatR pd = ideal_beampattern(cfg.target_angles, cfg.mainlobe_width_deg, grid);
    VecC x = random_complex(cfg.M, rng, 0.1);

    SensingReference ref =
        design_reference_signal(ch.G, x, pd, grid, pos, cfg.lambda, rng, 4, nullptr);

    double power = (ch.G * x).squaredNorm();
    CHECK(rel_err(ref.s_r.squaredNorm(), power) < 1e-8);
    CHECK(ref.beta > 0.0);
    CHECK(rel_err(ref.lambda_s, ref.s_r.squaredNorm()) < 1e-10);

    // single target: grid argmax of the designed beampattern at the target
    MatR ps = beampattern(ref.s_r * ref.s_r.adjoint(), pos, grid, cfg.lambda);
    int argmax = 0;
    ps.col(0).maxCoeff(&argmax);
    CHECK(std::abs(rad2deg(grid.azimuths[argmax]) - 10.0) <= 5.0);

    // final fit is consistent with the returned beta
    CHECK(rel_err(ref.final_mismatch, mismatch(ref.beta, pd, ps)) < 1e-8);

    CHECK_THROWS_AS(design_reference_signal(ch.G, VecC::Zero(cfg.M), pd, grid, pos,
                                            cfg.lambda, rng, 0, nullptr),
                    std::domain_error);
}

TEST_CASE("sensing_mse") {
    SystemConfig cfg;
    Rng rng(13);
    SolverState st = random_state(cfg, rng);
    VecC x = st.W * st.s_c;
    VecC refl = st.theta.conjugate().asDiagonal() * (st.channels.G * x);

    CHECK(sensing_mse(refl, st.theta, st.channels.G, x) == doctest::Approx(0.0));
    CHECK(rel_err(sensing_mse(VecC::Zero(cfg.N), st.theta, st.channels.G, x),
                  (st.channels.G * x).squaredNorm()) < 1e-10);

    // norm-expansion oracle
    VecC s = random_complex(cfg.N, rng, 0.05);
    double direct = sensing_mse(s, st.theta, st.channels.G, x);
    double expand = s.squaredNorm() + refl.squaredNorm() - 2.0 * (s.dot(refl)).real();
    CHECK(rel_err(direct, expand) < 1e-9);
}

TEST_SUITE_END();
