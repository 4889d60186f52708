// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstring>

#include "fris/position_opt.hpp"
#include "test_util.hpp"

using namespace fris;
using namespace fris::testutil;

TEST_SUITE_BEGIN("orchestrator");

TEST_CASE("evaluate_objective combination identity") {
    Rng rng(61);
    for (double alpha : {0.0, 0.3, 0.5, 1.0}) {
        SystemConfig cfg;
        cfg.alpha = alpha;
        SolverState st = random_state(cfg, rng);
        Objective o = evaluate_objective(st);
        CHECK(std::abs(o.epsilon -
                       (alpha * o.epsilon_r_tilde + (1 - alpha) * o.epsilon_c)) <
              1e-12 * std::max(1.0, o.epsilon));
        if (alpha == 1.0) CHECK(o.epsilon == doctest::Approx(o.epsilon_r_tilde));
        if (alpha == 0.0) CHECK(o.epsilon == doctest::Approx(o.epsilon_c));
    }
}

TEST_CASE("rand_positions feasibility and fallback") {
    Rng rng(62);
    PositionSet sparse = rand_positions(8, 0.5, 0.0625, rng);
    CHECK(sparse.feasible(0.5, 0.0625));
    // density near the packing limit triggers the lattice fallback
    PositionSet dense = rand_positions(16, 0.25, 0.0625, rng);
    CHECK(dense.feasible(0.25, 0.0625));
}

TEST_CASE("trial_seed decorrelates trials") {
    CHECK(trial_seed(1, 0) != trial_seed(1, 1));
    CHECK(trial_seed(1, 0) != trial_seed(2, 0));
    CHECK(trial_seed(7, 3) == trial_seed(7, 3));
}

TEST_CASE("conven scheme never moves the packing lattice") {
    SystemConfig cfg;
    cfg.am_tol = 1e-3;  // fast run; position invariance is structural
    SolverState st = run_am(cfg, SchemeKind::Conven);
    PositionSet lattice = circle_packing_init(cfg.N, cfg.A, cfg.DeltaD);
    CHECK((st.positions.p - lattice.p).norm() == 0.0);
    CHECK(st.converged);
}

TEST_CASE("monte_carlo trials=1 equals a single run_am") {
    SystemConfig cfg;
    cfg.am_tol = 1e-3;
    McReport rep = monte_carlo(cfg, SchemeKind::Conven, 1, 1);
    SystemConfig tc = cfg;
    tc.seed = trial_seed(cfg.seed, 0);
    tc.user_pos.clear();
    SolverState st = run_am(tc, SchemeKind::Conven);
    CHECK(rep.per_trial[0].epsilon == st.epsilon);
    CHECK(rep.per_trial[0].iterations == st.iterations);
}

TEST_CASE("monte_carlo determinism across repeats and thread counts") {
    SystemConfig cfg;
    cfg.am_tol = 1e-3;
    McReport a = monte_carlo(cfg, SchemeKind::Rand, 4, 1);
    McReport b = monte_carlo(cfg, SchemeKind::Rand, 4, 3);
    for (int t = 0; t < 4; ++t) {
        CHECK(std::memcmp(&a.per_trial[t].epsilon, &b.per_trial[t].epsilon,
                          sizeof(double)) == 0);
        CHECK(a.per_trial[t].iterations == b.per_trial[t].iterations);
    }
    CHECK(a.mean_eps == b.mean_eps);
}

TEST_CASE("dps_position_pass greedy contract") {
    SystemConfig cfg;
    cfg.N = 1;
    cfg.K = 2;
    cfg.T = 1;
    cfg.target_angles = {{deg2rad(10.0), 0.0}};
    Rng rng(63);
    cfg.place_users(rng);
    SolverState st = random_state(cfg, rng);

    // 1 element, 2x2 grid: pass result matches exhaustive 4-point evaluation
    double spacing = cfg.A;  // steps = 1 -> grid {0, A}^2
    SolverState probe = st;
    double best = evaluate_objective(probe).epsilon;
    Vec2 bestp = probe.positions.at(0);
    for (double x : {0.0, cfg.A})
        for (double y : {0.0, cfg.A}) {
            SolverState cand = st;
            cand.positions.p.row(0) << x, y;
            cand.channels = build_channels(st.cfg, cand.positions);
            double eps = evaluate_objective(cand).epsilon;
            if (eps < best) { best = eps; bestp = Vec2(x, y); }
        }
    dps_position_pass(st, spacing);
    CHECK((st.positions.at(0) - bestp).norm() < 1e-12);
    CHECK(evaluate_objective(st).epsilon == doctest::Approx(best));
}

TEST_CASE("dps pass never increases the objective") {
    SystemConfig cfg;
    cfg.N = 4;
    Rng rng(64);
    SolverState st = random_state(cfg, rng);
    // snap the current positions onto the DPS grid so the grid always
    // contains the incumbent point
    for (int n = 0; n < cfg.N; ++n)
        for (int c = 0; c < 2; ++c)
            st.positions.p(n, c) =
                std::round(st.positions.p(n, c) / cfg.dps_spacing) * cfg.dps_spacing;
    if (!st.positions.feasible(cfg.A, cfg.DeltaD)) return;  // rare snap collision
    st.channels = build_channels(st.cfg, st.positions);
    double before = evaluate_objective(st).epsilon;
    dps_position_pass(st, cfg.dps_spacing);
    CHECK(evaluate_objective(st).epsilon <= before + 1e-12);
}

TEST_CASE("dps greedy vs joint brute force on two elements") {
    SystemConfig cfg;
    cfg.N = 2;
    Rng rng(65);
    SolverState st = random_state(cfg, rng);
    double spacing = cfg.A / 2;  // 3x3 grid per element
    SolverState greedy = st;
    dps_position_pass(greedy, spacing);
    double geps = evaluate_objective(greedy).epsilon;

    // joint search over grid points plus each element's original (possibly
    // off-grid) position, since the greedy pass may leave an element in place
    double best = evaluate_objective(st).epsilon;
    std::vector<double> pts{0.0, cfg.A / 2, cfg.A};
    std::vector<Vec2> cand0, cand1;
    for (double x : pts)
        for (double y : pts) {
            cand0.emplace_back(x, y);
            cand1.emplace_back(x, y);
        }
    cand0.push_back(st.positions.at(0));
    cand1.push_back(st.positions.at(1));
    for (const Vec2& p0 : cand0)
        for (const Vec2& p1 : cand1) {
            if ((p0 - p1).norm() < cfg.DeltaD) continue;
            SolverState cand = st;
            cand.positions.p.row(0) = p0.transpose();
            cand.positions.p.row(1) = p1.transpose();
            cand.channels = build_channels(st.cfg, cand.positions);
            best = std::min(best, evaluate_objective(cand).epsilon);
        }
    CHECK(geps >= best - 1e-12);  // greedy can't beat the joint optimum
}

TEST_CASE("per-substep trace is monotone within iterations") {
    SystemConfig cfg;
    SolverState st = run_am(cfg, SchemeKind::Proposed);
    CHECK(st.converged);
    for (const StepTrace& tr : st.trace) {
        CHECK(tr.eps_after_omega <= tr.eps_after_sr + 1e-8);
        CHECK(tr.eps_after_theta <= tr.eps_after_omega + 1e-8);
        CHECK(tr.eps_after_w <= tr.eps_after_theta + 1e-8);
        CHECK(tr.eps_after_p <= tr.eps_after_w + 1e-8);
    }
    // outer boundaries non-increasing
    for (size_t i = 1; i < st.trace.size(); ++i)
        CHECK(st.trace[i].eps_after_p <=
              st.trace[i - 1].eps_after_p * (1.0 + 1e-6) + 1e-15);
}

TEST_SUITE_END();
