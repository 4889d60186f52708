// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "fris/channel.hpp"
#include "fris/numerics.hpp"
#include "fris/types.hpp"

namespace fris {

/// Position-independent constants of the per-element objective: everything in
/// the reduced objective f0 (and its single-element form f1) except the
/// element positions themselves.
struct PositionContext {
    VecC a_t_row;  // entries of a_t^H x s_r^H Theta^H (a 1xN row, stored as a vector)
    double c_x = 0;    // a_t^H x x^H a_t (real, >= 0)
    double c0 = 0;     // omega^2 zeta_G c_x
    MatC S;            // N x K, conj(theta) (a_t^H x) s_c^H Sigma_rc^H
    VecC theta;        // current phases
    double kappa_rx = 0, kappa_ry = 0;  // sin(phi_r)cos(psi_r), sin(psi_r)
    VecR kappa_cx, kappa_cy;            // per-user direction cosines
    VecR dkx, dky;                      // kappa_r - kappa_c differences
    double zeta_G = 0;
    VecR zeta;  // per-user path gains zeta_k
    double alpha = 0, omega = 0, lambda = 0;
    GeometryAngles angles;
};

PositionContext build_position_context(const ChannelSet& ch, const VecC& theta,
                                       const VecC& x, const VecC& s_r, const VecC& s_c,
                                       double omega, double alpha, double lambda, int M);

// Reduced objective f0(p): equals the full weighted objective up to a
// position-independent constant (differences are exact).
double f0_value(const PositionContext& ctx, const PositionSet& positions);

/// Per-element cosine-sum parameters: f1(p_n) =
///   -nu_n cos(xi_n + c d_r(p_n))
///   + sum_k sum_{i != n} nu_tilde_k cos(xi_tilde_{i,k} + c dd_k(p_n))
///   - sum_k nu_bar_k cos(xi_bar_k + c dd_k(p_n)),   c = 2 pi / lambda,
/// with d_r the BS-direction path difference and dd_k = d_r - d_{c,k}.
struct SurrogateParams {
    int n = 0;
    double nu_n = 0, xi_n = 0;
    VecR nu_tilde;  // K
    MatR xi_tilde;  // N x K (row n unused)
    VecR nu_bar, xi_bar;  // K
    double kappa_rx = 0, kappa_ry = 0;
    VecR dkx, dky;  // K
    double lambda = 0;
    int N = 0, K = 0;
};

SurrogateParams per_element_params(const PositionContext& ctx, int n,
                                   const PositionSet& positions);

double f1_value(const SurrogateParams& params, const Vec2& p_n);

struct F1Derivatives {
    Vec2 gradient = Vec2::Zero();
    Eigen::Matrix2d hessian = Eigen::Matrix2d::Zero();
    double delta_n = 0;  // max(||hessian||_F, 1e-6)
};

F1Derivatives f1_derivatives(const SurrogateParams& params, const Vec2& p_n);

// Loose global bound on ||hess f1||_2, independent of p_n.
double curvature_bound(const SurrogateParams& params);

// Affine rows a^T p >= b: one per other element (first-order expansion of the
// distance constraint about p_n_prev) plus the four box rows for [0,A]^2.
// Throws std::domain_error if p_n_prev coincides with another element, and
// std::invalid_argument if p_n_prev itself violates a distance.
std::vector<QpProblem::Row> linearize_constraints(const Vec2& p_n_prev,
                                                  const std::vector<Vec2>& others,
                                                  double DeltaD, double A);

struct SurrogateQP {
    Vec2 gradient = Vec2::Zero();
    double delta_n = 1.0;
    Vec2 expansion_point = Vec2::Zero();
    std::vector<QpProblem::Row> rows;
};

Vec2 solve_position_qp(const SurrogateQP& qp);

// Deterministic lattice initialization with guaranteed DeltaD separation.
// Square cell-center lattice when it fits, hexagonal fallback otherwise.
PositionSet circle_packing_init(int N, double A, double DeltaD);

struct PositionPassOptions {
    bool random_order = false;
    double mono_tol = 1e-8;
    int max_delta_doublings = 30;
    // Per-element MM is iterated to a fixed point within the pass; a single
    // gradient step per element makes the outer loop crawl across the region.
    int max_inner_steps = 100;
    double step_tol = 1e-9;  // meters
    // The element sweep repeats until the block reaches a coordinate-descent
    // fixed point, so the outer loop alternates between fully-minimized blocks.
    int max_sweeps = 200;
    double sweep_tol = 1e-8;  // objective improvement per sweep
};

// One sweep of per-element MM updates (the inner position loop). Each commit
// is guarded: if the surrogate step increases f1, delta_n doubles and the QP
// is re-solved. Returns a feasible position set.
PositionSet run_position_pass(const PositionContext& ctx, const PositionSet& start,
                              double A, double DeltaD, Rng& rng,
                              const PositionPassOptions& opts = {});

}  // namespace fris
