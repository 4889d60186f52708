// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "fris/channel.hpp"
#include "fris/comm.hpp"
#include "fris/config.hpp"
#include "fris/sensing.hpp"
#include "fris/types.hpp"

namespace fris {

/// Objective value after each sub-step of one outer iteration.
struct StepTrace {
    int iteration = 0;
    double eps_after_sr = 0;
    double eps_after_omega = 0;
    double eps_after_theta = 0;
    double eps_after_w = 0;
    double eps_after_p = 0;
    double epsilon_r_tilde = 0;
    double epsilon_c = 0;
    double sr_drift = 0;  // eps_after_sr minus the previous iteration's objective
};

struct SolverState {
    SystemConfig cfg;
    SchemeKind scheme = SchemeKind::Proposed;

    PositionSet positions;
    ChannelSet channels;  // rebuilt whenever positions change
    VecC theta;
    MatC W;
    double omega = 0;
    VecC s_r;
    VecC s_c;  // fixed unit-energy pilot block
    double beta = 0;

    double epsilon = 0, epsilon_r_tilde = 0, epsilon_c = 0;
    int iterations = 0;
    bool converged = false;
    std::vector<StepTrace> trace;
};

struct Objective {
    double epsilon = 0, epsilon_r_tilde = 0, epsilon_c = 0;
};

// Ground-truth evaluator: recomputes both objective terms from scratch.
Objective evaluate_objective(const SolverState& state);

// Uniform feasible positions by rejection sampling; falls back to a jittered
// packing lattice when the density is too high for rejection to terminate.
PositionSet rand_positions(int N, double A, double DeltaD, Rng& rng);

// Greedy per-element grid search at the given spacing; commits the argmin of
// the full objective, ties broken by smallest x then y. Elements keep their
// position when no feasible grid point exists. Updates state in place and
// returns the new positions.
PositionSet dps_position_pass(SolverState& state, double grid_spacing);

// Full alternating-minimization run for one scheme (the outer loop).
SolverState run_am(const SystemConfig& cfg, SchemeKind scheme);

struct TrialResult {
    int trial = 0;
    bool failed = false;
    std::string error;
    double epsilon = 0, epsilon_r_tilde = 0, epsilon_c = 0;
    int iterations = 0;
    bool converged = false;
    double wall_s = 0;
};

struct McReport {
    int trials = 0;
    int failures = 0;
    double mean_eps = 0, std_eps = 0;
    double mean_eps_r = 0, mean_eps_c = 0;
    double mean_iterations = 0;
    double mean_time_s = 0;
    std::vector<TrialResult> per_trial;
    // Populated only when keep_states is set (used by figure-style runs).
    std::vector<SolverState> states;
};

// Independent seeded trials (per-trial user placement and pilot redraw).
// Trial failures are recorded, not fatal. Deterministic for a fixed config
// seed regardless of `threads`.
McReport monte_carlo(const SystemConfig& cfg, SchemeKind scheme, int trials,
                     int threads = 1, bool keep_states = false);

// Per-trial RNG stream seed (splitmix64 of the config seed and trial index).
std::uint64_t trial_seed(std::uint64_t seed, int trial);

}  // namespace fris
