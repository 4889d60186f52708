// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "fris/types.hpp"

namespace fris {

/// Isotropic strictly-convex 2-D QP:
///   min g^T (p - p0) + delta/2 ||p - p0||^2
///   s.t. a_i^T p >= b_i  for every row.
/// Box bounds are supplied as plain rows by the caller.
struct QpProblem {
    double delta = 1.0;
    Vec2 gradient = Vec2::Zero();
    Vec2 expansion_point = Vec2::Zero();
    struct Row {
        Vec2 normal;
        double offset;
    };
    std::vector<Row> rows;
};

// Exact solution of QpProblem. `start` must be feasible; the optimum is the
// feasible candidate of minimum objective among the unconstrained point,
// single-row projections, and row-pair vertices (exhaustive active sets at
// d = 2). Throws std::runtime_error if no feasible candidate exists.
Vec2 active_set_qp(const QpProblem& qp, const Vec2& start);

struct SolveStats {
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

/// f evaluates the objective and fills the gradient.
using RealObjective = std::function<double(const VecR&, VecR& grad)>;

// Limited-memory quasi-Newton (memory 10) with Armijo backtracking.
// Stops when ||grad|| < tol or after max_iters accepted steps.
VecR quasi_newton_minimize(const RealObjective& f, const VecR& x0, double tol,
                           int max_iters = 500, SolveStats* stats = nullptr);

// Riemannian descent for min th^H A1 th - 2 Re{b1^H th} on the unit-modulus
// torus, with per-entry retraction. Monotone in the quadratic objective.
VecC unit_modulus_descent(const MatC& A1, const VecC& b1, const VecC& theta0,
                          double tol = 1e-8, int max_iters = 200,
                          SolveStats* stats = nullptr);

// Dominant eigenpair of a Hermitian PSD matrix. `zero_flag` (optional) is set
// when the matrix is numerically zero and the eigenvector is arbitrary.
void dominant_eigpair(const MatC& H, double& lambda_max, VecC& u,
                      bool* zero_flag = nullptr);

/// f evaluates the objective and fills the conjugate-direction gradient
/// (d/d conj(x)); the Euclidean descent direction is -grad.
using ComplexObjective = std::function<double(const VecC&, VecC& grad)>;

// Projected/Riemannian gradient descent on the complex sphere ||x|| = radius,
// best of `restarts` random starts plus x0. Monotone per accepted step.
VecC sphere_constrained_min(const ComplexObjective& f, double radius, const VecC& x0,
                            int restarts, Rng& rng, double tol = 1e-9,
                            int max_iters = 300, SolveStats* stats = nullptr);

}  // namespace fris
