// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "fris/types.hpp"

namespace fris {

/// Vectorized beamformer subproblem min w^H A2 w - 2 Re{b2^H w} on the power
/// sphere w^H w = P_t, together with its real embedding.
struct BeamformerQuadratic {
    MatC A2;       // MK x MK Hermitian PSD
    VecC b2;       // MK
    MatR A2_real;  // 2MK x 2MK
    VecR b2_real;  // 2MK
    double P_t = 0;
    int M = 0, K = 0;
};

BeamformerQuadratic build_w_quadratic(const MatC& G, const VecC& theta, const MatC& H_rc,
                                      const VecC& s_r, const VecC& s_c, double omega,
                                      double alpha, double P_t);

double w_objective(const BeamformerQuadratic& q, const MatC& W);

struct AlmState {
    double mu = 0.0;
    double gamma = 1.0;
    double feasibility = 0.0;
    int outer_iterations = 0;
};

// ALM with a limited-memory quasi-Newton inner solver. Returns W (M x K) with
// |  ||W||^2 - P_t | < alm_tol. Throws std::runtime_error on non-convergence
// after 100 outer iterations (reporting the last feasibility).
MatC alm_optimize_w(const BeamformerQuadratic& q, const MatC& W_init, double alm_tol,
                    AlmState* state = nullptr);

}  // namespace fris
